//! Connectedness measures aggregated from a normalized decomposition.
//!
//! With `d` the row-normalized matrix (row `i` receives from column `j`):
//!
//! * from-connectedness of `i`: off-diagonal row sum, `100 * sum_{j != i} d_ij`;
//! * to-connectedness of `i`: off-diagonal column sum, `100 * sum_{j != i} d_ji`;
//! * net = to - from;
//! * total = `(100 / N) * sum_{i != j} d_ij`.
//!
//! To-connectedness is a plain column sum, not divided by the column total.
//! That is the convention under which from + own share = 100 and
//! total = 100 - mean own share hold simultaneously, and the one that
//! reproduces published connectedness tables where "to" values exceed 100.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fevd::FevdMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectednessTable {
    pub fevd: FevdMatrix,
    pub from_pct: DVector<f64>,
    pub to_pct: DVector<f64>,
    pub net_pct: DVector<f64>,
    pub self_pct: DVector<f64>,
    pub total_pct: f64,
}

impl ConnectednessTable {
    pub fn series_ids(&self) -> &[String] {
        &self.fevd.series_ids
    }

    pub fn n_series(&self) -> usize {
        self.fevd.n_series()
    }

    /// Pairwise directional connectedness in percent (row receives from
    /// column).
    pub fn pairwise_pct(&self) -> DMatrix<f64> {
        &self.fevd.normalized * 100.0
    }

    pub fn measure(&self, measure: Measure) -> &DVector<f64> {
        match measure {
            Measure::From => &self.from_pct,
            Measure::To => &self.to_pct,
            Measure::Net => &self.net_pct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    From,
    To,
    Net,
}

/// Positive part of the pairwise difference, in percent:
/// `c_ij = max(d_ij - d_ji, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetPairwiseMatrix {
    pub series_ids: Vec<String>,
    pub values: DMatrix<f64>,
}

pub fn connectedness(fevd: &FevdMatrix) -> ConnectednessTable {
    let d = &fevd.normalized;
    let n = d.nrows();
    let self_pct = DVector::from_fn(n, |i, _| 100.0 * d[(i, i)]);
    let from_pct = DVector::from_fn(n, |i, _| 100.0 * (0..n).filter(|&j| j != i).map(|j| d[(i, j)]).sum::<f64>());
    let to_pct = DVector::from_fn(n, |i, _| 100.0 * (0..n).filter(|&j| j != i).map(|j| d[(j, i)]).sum::<f64>());
    let net_pct = &to_pct - &from_pct;
    let total_pct = if n == 0 { 0.0 } else { from_pct.sum() / n as f64 };
    ConnectednessTable {
        fevd: fevd.clone(),
        from_pct,
        to_pct,
        net_pct,
        self_pct,
        total_pct,
    }
}

pub fn net_pairwise(fevd: &FevdMatrix) -> NetPairwiseMatrix {
    let d = &fevd.normalized;
    let n = d.nrows();
    let values = DMatrix::from_fn(n, n, |i, j| {
        let diff = d[(i, j)] - d[(j, i)];
        if i != j && diff > 0.0 {
            100.0 * diff
        } else {
            0.0
        }
    });
    NetPairwiseMatrix {
        series_ids: fevd.series_ids.clone(),
        values,
    }
}

/// Series ordered by `measure`, largest first; ties go to the
/// lexicographically smaller id.
pub fn rank(table: &ConnectednessTable, measure: Measure) -> Vec<(String, f64)> {
    let values = table.measure(measure);
    let mut out: Vec<(String, f64)> = table
        .series_ids()
        .iter()
        .cloned()
        .zip(values.iter().copied())
        .collect();
    out.sort_by(|a, b| match b.1.partial_cmp(&a.1) {
        Some(Ordering::Equal) | None => a.0.cmp(&b.0),
        Some(o) => o,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    fn fevd(m: DMatrix<f64>) -> FevdMatrix {
        let ids = (1..=m.nrows()).map(|i| format!("series{i}")).collect();
        FevdMatrix::from_shares(ids, 10, m).unwrap()
    }

    #[test]
    fn identity_has_no_spillover() {
        let t = connectedness(&fevd(DMatrix::identity(4, 4)));
        assert!(t.from_pct.iter().chain(t.to_pct.iter()).chain(t.net_pct.iter()).all(|v| *v == 0.0));
        assert_eq!(t.total_pct, 0.0);
        let ranked = rank(&t, Measure::Net);
        let order: Vec<_> = ranked.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(order, ["series1", "series2", "series3", "series4"]);
    }

    #[test]
    fn two_series_hand_example() {
        let f = fevd(dmatrix![0.6, 0.4; 0.3, 0.7]);
        let t = connectedness(&f);
        let close = |a: f64, b: f64| (a - b).abs() < 1e-12;
        assert!(close(t.from_pct[0], 40.0) && close(t.from_pct[1], 30.0));
        assert!(close(t.to_pct[0], 30.0) && close(t.to_pct[1], 40.0));
        assert!(close(t.net_pct[0], -10.0) && close(t.net_pct[1], 10.0));
        assert!(close(t.total_pct, 35.0));

        let npm = net_pairwise(&f);
        assert!(close(npm.values[(0, 1)], 10.0));
        assert_eq!(npm.values[(1, 0)], 0.0);

        let ranked = rank(&t, Measure::Net);
        assert_eq!(ranked[0].0, "series2");
        assert!(close(ranked[0].1, 10.0));
        assert_eq!(ranked[1].0, "series1");
        assert!(close(ranked[1].1, -10.0));
    }

    #[test]
    fn symmetric_matrix_has_no_net_pairs() {
        let f = fevd(dmatrix![0.5, 0.25, 0.25; 0.25, 0.5, 0.25; 0.25, 0.25, 0.5]);
        assert_eq!(net_pairwise(&f).values, DMatrix::zeros(3, 3));
    }

    #[test]
    fn rank_ties_break_on_id() {
        let ids = vec!["b".to_string(), "a".to_string(), "c".to_string()];
        let f = FevdMatrix::from_shares(ids, 5, dmatrix![0.5, 0.25, 0.25; 0.25, 0.5, 0.25; 0.25, 0.25, 0.5]).unwrap();
        let t = connectedness(&f);
        let order: Vec<_> = rank(&t, Measure::To).into_iter().map(|(id, _)| id).collect();
        assert_eq!(order, ["a", "b", "c"]);
    }
}
