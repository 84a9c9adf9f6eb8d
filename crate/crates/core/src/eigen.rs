//! Eigenvalues of a general real matrix with a bounded iteration count.
//!
//! nalgebra's eigenvalue-only path has no iteration limit and never returns
//! on some inputs (nilpotent companion matrices, for one), while its bounded
//! `Schur::try_new` also accumulates the orthogonal factor. This is the
//! EISPACK `hqr` shifted double-step QR on nalgebra's Hessenberg form:
//! eigenvalues only, exceptional shifts after 10 and 20 stalled sweeps, and
//! failure after 30 sweeps on a single eigenvalue.

use nalgebra::linalg::Hessenberg;
use nalgebra::DMatrix;

const MAX_SWEEPS: usize = 30;

/// `(re, im)` pairs, or `None` if the iteration does not converge.
pub(crate) fn eigenvalues(m: &DMatrix<f64>) -> Option<Vec<(f64, f64)>> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix");
    match n {
        0 => return Some(Vec::new()),
        1 => return Some(vec![(m[(0, 0)], 0.0)]),
        _ => {}
    }
    let mut h = Hessenberg::new(m.clone()).unpack_h();
    hqr(&mut h)
}

fn sign(a: f64, b: f64) -> f64 {
    if b >= 0.0 {
        a.abs()
    } else {
        -a.abs()
    }
}

/// In-place QR iteration on an upper Hessenberg matrix. Indices follow the
/// classic 1-based formulation through the `a!` accessor.
fn hqr(h: &mut DMatrix<f64>) -> Option<Vec<(f64, f64)>> {
    let n = h.nrows();
    let idx = |i: usize, j: usize| (i - 1, j - 1);
    macro_rules! a {
        ($i:expr, $j:expr) => {
            h[idx($i, $j)]
        };
    }
    let mut wr = vec![0.0; n + 1];
    let mut wi = vec![0.0; n + 1];

    let mut anorm = 0.0;
    for i in 1..=n {
        for j in i.saturating_sub(1).max(1)..=n {
            anorm += a!(i, j).abs();
        }
    }
    if anorm == 0.0 {
        return Some(vec![(0.0, 0.0); n]);
    }

    let mut nn = n;
    let mut t = 0.0;
    let (mut p, mut q, mut r, mut x, mut y, mut z, mut w, mut s): (f64, f64, f64, f64, f64, f64, f64, f64);
    while nn >= 1 {
        let mut its = 0;
        loop {
            // look for a single small subdiagonal element
            let mut l = nn;
            while l >= 2 {
                s = a!(l - 1, l - 1).abs() + a!(l, l).abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a!(l, l - 1).abs() + s == s {
                    a!(l, l - 1) = 0.0;
                    break;
                }
                l -= 1;
            }
            x = a!(nn, nn);
            if l == nn {
                // one root found
                wr[nn] = x + t;
                wi[nn] = 0.0;
                nn -= 1;
                break;
            }
            y = a!(nn - 1, nn - 1);
            w = a!(nn, nn - 1) * a!(nn - 1, nn);
            if l == nn - 1 {
                // two roots found
                p = 0.5 * (y - x);
                q = p * p + w;
                z = q.abs().sqrt();
                x += t;
                if q >= 0.0 {
                    z = p + sign(z, p);
                    wr[nn - 1] = x + z;
                    wr[nn] = x + z;
                    if z != 0.0 {
                        wr[nn] = x - w / z;
                    }
                    wi[nn - 1] = 0.0;
                    wi[nn] = 0.0;
                } else {
                    wr[nn - 1] = x + p;
                    wr[nn] = x + p;
                    wi[nn - 1] = -z;
                    wi[nn] = z;
                }
                nn = nn.saturating_sub(2);
                break;
            }
            if its == MAX_SWEEPS {
                return None;
            }
            if its == 10 || its == 20 {
                // exceptional shift
                t += x;
                for i in 1..=nn {
                    a!(i, i) -= x;
                }
                s = a!(nn, nn - 1).abs() + a!(nn - 1, nn - 2).abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // form the shift and look for two consecutive small subdiagonals
            let mut m = nn - 2;
            loop {
                z = a!(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / a!(m + 1, m) + a!(m, m + 1);
                q = a!(m + 1, m + 1) - z - r - s;
                r = a!(m + 2, m + 1);
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a!(m, m - 1).abs() * (q.abs() + r.abs());
                let v = p.abs() * (a!(m - 1, m - 1).abs() + z.abs() + a!(m + 1, m + 1).abs());
                if u + v == v {
                    break;
                }
                m -= 1;
            }
            for i in m + 2..=nn {
                a!(i, i - 2) = 0.0;
                if i != m + 2 {
                    a!(i, i - 3) = 0.0;
                }
            }
            // double QR step on rows l..nn and columns m..nn
            for k in m..nn {
                if k != m {
                    p = a!(k, k - 1);
                    q = a!(k + 1, k - 1);
                    r = 0.0;
                    if k != nn - 1 {
                        r = a!(k + 2, k - 1);
                    }
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                s = sign((p * p + q * q + r * r).sqrt(), p);
                if s != 0.0 {
                    if k == m {
                        if l != m {
                            a!(k, k - 1) = -a!(k, k - 1);
                        }
                    } else {
                        a!(k, k - 1) = -s * x;
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..=nn {
                        p = a!(k, j) + q * a!(k + 1, j);
                        if k != nn - 1 {
                            p += r * a!(k + 2, j);
                            a!(k + 2, j) -= p * z;
                        }
                        a!(k + 1, j) -= p * y;
                        a!(k, j) -= p * x;
                    }
                    let mmin = if nn < k + 3 { nn } else { k + 3 };
                    for i in l..=mmin {
                        p = x * a!(i, k) + y * a!(i, k + 1);
                        if k != nn - 1 {
                            p += z * a!(i, k + 2);
                            a!(i, k + 2) -= p * r;
                        }
                        a!(i, k + 1) -= p * q;
                        a!(i, k) -= p;
                    }
                }
            }
        }
    }
    Some((1..=n).map(|i| (wr[i], wi[i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::rng;
    use crate::var::companion_matrix;
    use rand::Rng;

    fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    fn reference(m: &DMatrix<f64>) -> Vec<(f64, f64)> {
        sorted(m.clone().complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect())
    }

    #[test]
    fn matches_nalgebra_on_random_matrices() {
        let mut g = rng(4);
        for trial in 0..60 {
            let n = 2 + trial % 17;
            let m = DMatrix::from_fn(n, n, |_, _| g.gen_range(-1.0..1.0));
            let ours = sorted(eigenvalues(&m).unwrap());
            let theirs = reference(&m);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8, "n={n}: {a:?} vs {b:?}");
            }
        }
    }

    #[test]
    fn matches_nalgebra_on_companion_matrices() {
        let mut g = rng(9);
        for (n, p) in [(3, 2), (5, 3), (8, 4), (28, 2)] {
            let lags: Vec<_> = (0..p).map(|_| DMatrix::from_fn(n, n, |_, _| g.gen_range(-0.3..0.3))).collect();
            let c = companion_matrix(&lags);
            let ours = eigenvalues(&c).unwrap();
            let rho = ours.iter().map(|(re, im)| re.hypot(*im)).fold(0.0, f64::max);
            let rho_ref = c.clone().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!((rho - rho_ref).abs() < 1e-9, "{rho} vs {rho_ref}");
        }
    }

    #[test]
    fn known_spectra() {
        let rotation = nalgebra::dmatrix![0.0, -2.0; 2.0, 0.0];
        assert_eq!(sorted(eigenvalues(&rotation).unwrap()), vec![(0.0, -2.0), (0.0, 2.0)]);
        let tri = nalgebra::dmatrix![3.0, 1.0, 4.0; 0.0, -1.0, 5.0; 0.0, 0.0, 2.0];
        let ours: Vec<f64> = sorted(eigenvalues(&tri).unwrap()).iter().map(|e| e.0).collect();
        assert_eq!(ours, vec![-1.0, 2.0, 3.0]);
        assert_eq!(eigenvalues(&DMatrix::zeros(3, 3)).unwrap(), vec![(0.0, 0.0); 3]);
    }

    #[test]
    fn nilpotent_and_permutation_companions_terminate() {
        let nil = companion_matrix(&[DMatrix::zeros(3, 3), DMatrix::zeros(3, 3)]);
        if let Some(ev) = eigenvalues(&nil) {
            assert!(ev.iter().all(|(re, im)| re.hypot(*im) < 1e-3));
        }
        let cyclic = companion_matrix(&[DMatrix::zeros(3, 3), DMatrix::zeros(3, 3), DMatrix::identity(3, 3)]);
        if let Some(ev) = eigenvalues(&cyclic) {
            assert!(ev.iter().all(|(re, im)| (re.hypot(*im) - 1.0).abs() < 1e-8));
        }
    }
}
