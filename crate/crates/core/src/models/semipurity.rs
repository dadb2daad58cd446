//! The complex `ℝ(e+1) → Ω⁰ → … → Ω^e` of completed holomorphic forms at a
//! point of a curve, truncated at a finite order, and the vanishing scan for
//! Deligne homology of currents supported on a point.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{jet_model, ModelError};
use crate::deligne::{build_deligne, ChainComplex, DeligneError};
use crate::dolbeault::BigradedComplex;
use crate::duality::{dual_complex, DualityError};
use crate::exactnum::{CMatrix, Scalar};

/// `ℝ(e+1) → Ω⁰ → Ω¹ → … → Ω^e` with `Ω⁰ = ℂ[t]_{≤N}`, `Ω¹ = ℂ[t]_{≤N−1} dt`
/// and `Ω^q = 0` for `q ≥ 2`; `ℝ` sits in degree 0 and `Ω^q` in degree
/// `q+1`. Stored homologically: cohomological degree `k` at `−k`.
pub fn truncated_point_complex(e: i64, n: i64) -> ChainComplex {
    let mut dims = BTreeMap::new();
    let mut d = BTreeMap::new();
    dims.insert(0, 1);
    let omega = |q_: i64| -> usize {
        match q_ {
            0 => 2 * (n as usize + 1),
            1 => 2 * n as usize,
            _ => 0,
        }
    };
    for q_ in 0..=e {
        dims.insert(-(q_ + 1), omega(q_));
    }
    // ℝ(e+1) → Ω⁰: r ↦ i^{e+1} r
    let mut unit = CMatrix::zeros(n as usize + 1, 1);
    unit.set(0, 0, Scalar::i_pow(e + 1));
    let realified = unit.realify();
    d.insert(0, realified.select_columns(&[0]));
    if e >= 1 {
        // ∂/∂t : t^a ↦ a t^{a−1} dt
        let mut dt = CMatrix::zeros(n as usize, n as usize + 1);
        for a in 1..=n as usize {
            dt.set(a - 1, a, Scalar::from_int(a as i64));
        }
        d.insert(-1, dt.realify());
    }
    ChainComplex { dims, d }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointComparisonRow {
    pub degree: i64,
    pub point_complex: usize,
    pub point_complex_next_order: usize,
    pub deligne: usize,
    pub saturated: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointComparison {
    pub e: i64,
    pub order: i64,
    pub rows: Vec<PointComparisonRow>,
}

impl PointComparison {
    /// Agreement in every degree where orders `N` and `N+1` agree.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| !r.saturated || r.agree)
    }
}

fn cohomology(c: &ChainComplex, k: i64) -> usize {
    c.homology(-k).dim
}

/// Cohomology of the truncated point complex against `H^k(D(jet(N), e+1))`.
pub fn formal_deligne_point_complex(e: i64, n: i64) -> Result<PointComparison, DeligneError> {
    if e < 0 || n < 1 {
        return Err(DeligneError::UnsupportedRegime(format!("need e ≥ 0 and N ≥ 1, got e = {e}, N = {n}")));
    }
    let here = truncated_point_complex(e, n);
    let next = truncated_point_complex(e, n + 1);
    let jet = jet_model(n).expect("order checked");
    let table = build_deligne(&jet.complex, e + 1)?.homology_table();
    let rows = (0..=e + 3)
        .map(|k| {
            let (a, b) = (cohomology(&here, k), cohomology(&next, k));
            let dd = table.get(&k).copied().unwrap_or(0);
            PointComparisonRow { degree: k, point_complex: a, point_complex_next_order: b, deligne: dd, saturated: a == b, agree: a == dd }
        })
        .collect();
    Ok(PointComparison { e, order: n, rows })
}

/// Tempered-current models of a fixed support dimension.
#[derive(Clone, Debug)]
pub struct CurrentFamily {
    pub name: String,
    /// Dimension of the support.
    pub support_dim: i64,
    pub members: Vec<(String, BigradedComplex)>,
}

/// Duals of the jet models at a point, orders `orders`.
pub fn point_family(orders: &[i64]) -> Result<CurrentFamily, DualityError> {
    let mut members = Vec::new();
    for &n in orders {
        let jet = jet_model(n).map_err(|e: ModelError| DualityError::DegreeMismatch(e.to_string()))?;
        members.push((format!("N={n}"), dual_complex(&jet.complex)?.0));
    }
    Ok(CurrentFamily { name: "point".into(), support_dim: 0, members })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemipurityRow {
    pub member: String,
    pub e: i64,
    pub bound: i64,
    /// `H_n` dimensions over the scanned degrees.
    pub dims: BTreeMap<i64, usize>,
    /// Degrees above the bound with nonzero homology.
    pub violations: Vec<i64>,
    /// Whether `H_n ≠ 0` at `n = bound`.
    pub nonzero_at_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemipurityTable {
    pub family: String,
    pub support_dim: i64,
    pub rows: Vec<SemipurityRow>,
}

impl SemipurityTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.violations.is_empty())
    }
}

/// `H_n(D(B,e))` for each member `B` and `e`, against the vanishing bound
/// `n > max(e + p, 2p − 1)` with `p` the support dimension.
pub fn semipurity_scan(family: &CurrentFamily, es: &[i64], ns: &[i64]) -> Result<SemipurityTable, DeligneError> {
    let p = family.support_dim;
    let mut rows = Vec::new();
    for (label, b) in &family.members {
        for &e in es {
            let bound = (e + p).max(2 * p - 1);
            let table = build_deligne(b, e)?.homology_table();
            let dims: BTreeMap<i64, usize> = ns.iter().map(|&n| (n, table.get(&n).copied().unwrap_or(0))).collect();
            // degrees outside the window count as well
            let violations = table.iter().filter(|(&n, &d)| n > bound && d > 0).map(|(&n, _)| n).collect();
            let nonzero_at_bound = table.get(&bound).copied().unwrap_or(0) > 0;
            rows.push(SemipurityRow { member: label.clone(), e, bound, dims, violations, nonzero_at_bound });
        }
    }
    Ok(SemipurityTable { family: family.name.clone(), support_dim: p, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    // H¹ of ℝ(e+1) → Ω⁰ → Ω¹ by hand: for e = 0 the cokernel of ℝ → ℂ[t]_{≤N}
    // has rational dimension 2(N+1) − 1; for e ≥ 1 closed functions are the
    // constants ℂ, modulo ℝ(e+1) leaving dimension 1, and ∂/∂t is onto.
    fn h1_by_hand(e: i64, n: i64) -> usize {
        if e == 0 {
            2 * (n as usize + 1) - 1
        } else {
            1
        }
    }

    #[test]
    fn point_complex_by_hand() {
        for e in 0..=3 {
            for n in 1..=4 {
                let c = truncated_point_complex(e, n);
                assert_eq!(cohomology(&c, 0), 0);
                assert_eq!(cohomology(&c, 1), h1_by_hand(e, n));
                for k in 2..=e + 2 {
                    assert_eq!(cohomology(&c, k), 0, "e={e} N={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn point_complex_matches_deligne() {
        for e in 0..=2 {
            let r = formal_deligne_point_complex(e, 3).unwrap();
            assert!(r.passed());
            assert!(r.rows.iter().all(|x| x.agree));
        }
        assert!(formal_deligne_point_complex(-1, 2).is_err());
    }

    #[test]
    fn semipurity_on_points() {
        let fam = point_family(&[1, 2, 3]).unwrap();
        let t = semipurity_scan(&fam, &[0, 2], &(-2..=4).collect::<Vec<_>>()).unwrap();
        assert!(t.passed());
        for r in &t.rows {
            assert!(r.dims.iter().all(|(&n, &d)| n <= r.bound || d == 0));
        }
        // e = 0: dual of the point complex in degree 1, so 2N+1 at n = 0
        let row = t.rows.iter().find(|r| r.member == "N=2" && r.e == 0).unwrap();
        assert_eq!(row.dims[&0], h1_by_hand(0, 2));
        assert!(row.nonzero_at_bound);
    }
}
