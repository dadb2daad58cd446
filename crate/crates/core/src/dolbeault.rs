//! Finite bigraded Dolbeault complexes with a real structure.
//!
//! Internally every complex is homological: `∂` has bidegree `(-1, 0)` and
//! `∂̄` has bidegree `(0, -1)`. A cohomological complex with a piece at
//! `(p, q)` is stored at `(-p, -q)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::exactnum::{q, CMatrix, Field, QMatrix, QSubspace, Scalar};

pub type Bidegree = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Homological,
    Cohomological,
}

impl Variance {
    /// Sign relating user indices to stored homological indices.
    pub fn sign(self) -> i64 {
        match self {
            Variance::Homological => 1,
            Variance::Cohomological => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variance::Homological => "homological",
            Variance::Cohomological => "cohomological",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("block {block} at ({p}, {q}): expected {rows}x{cols}, got {got_rows}x{got_cols}")]
    Shape { block: String, p: i64, q: i64, rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("invalid complex: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Finite bigraded complex over the Gaussian rationals with differentials
/// `∂`, `∂̄` and an antilinear conjugation `σ(x) = S·x̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct BigradedComplex {
    pub name: String,
    pub variance: Variance,
    /// Complex dimension of the underlying space, when the model has one.
    pub dimension: Option<i64>,
    dims: BTreeMap<Bidegree, usize>,
    del: BTreeMap<Bidegree, CMatrix>,
    delbar: BTreeMap<Bidegree, CMatrix>,
    sigma: BTreeMap<Bidegree, CMatrix>,
}

/// Position of each bidegree block inside the coordinate vector of `A_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub blocks: Vec<(Bidegree, usize, usize)>,
    pub total: usize,
}

impl Layout {
    pub fn offset(&self, b: Bidegree) -> Option<(usize, usize)> {
        self.blocks.iter().find(|(bd, _, _)| *bd == b).map(|&(_, o, d)| (o, d))
    }
}

impl BigradedComplex {
    /// Build from blocks given in the complex's own variance. Matrices are
    /// keyed by source bidegree; missing blocks are zero.
    pub fn new(
        name: impl Into<String>,
        variance: Variance,
        dimension: Option<i64>,
        dims: BTreeMap<Bidegree, usize>,
        del: BTreeMap<Bidegree, CMatrix>,
        delbar: BTreeMap<Bidegree, CMatrix>,
        sigma: BTreeMap<Bidegree, CMatrix>,
    ) -> Result<Self, ComplexError> {
        let s = variance.sign();
        let flip = |(p, q): Bidegree| (s * p, s * q);
        let dims: BTreeMap<Bidegree, usize> =
            dims.into_iter().filter(|&(_, d)| d > 0).map(|(b, d)| (flip(b), d)).collect();
        let dim_at = |b: Bidegree| dims.get(&b).copied().unwrap_or(0);
        let mut out = BigradedComplex {
            name: name.into(),
            variance,
            dimension,
            dims: dims.clone(),
            del: BTreeMap::new(),
            delbar: BTreeMap::new(),
            sigma: BTreeMap::new(),
        };
        type Target = fn(Bidegree) -> Bidegree;
        let blocks: [(&str, BTreeMap<Bidegree, CMatrix>, Target); 3] = [
            ("del", del, |(p, q)| (p - 1, q)),
            ("delbar", delbar, |(p, q)| (p, q - 1)),
            ("sigma", sigma, |(p, q)| (q, p)),
        ];
        for (label, map, target) in blocks {
            for (user_b, m) in map {
                let b = flip(user_b);
                let (rows, cols) = (dim_at(target(b)), dim_at(b));
                if m.rows() != rows || m.cols() != cols {
                    return Err(ComplexError::Shape {
                        block: label.to_string(),
                        p: user_b.0,
                        q: user_b.1,
                        rows,
                        cols,
                        got_rows: m.rows(),
                        got_cols: m.cols(),
                    });
                }
                if rows == 0 || cols == 0 {
                    continue;
                }
                let slot = match label {
                    "del" => &mut out.del,
                    "delbar" => &mut out.delbar,
                    _ => &mut out.sigma,
                };
                slot.insert(b, m);
            }
        }
        Ok(out)
    }

    /// Dimensions keyed by user-convention bidegree.
    pub fn dims(&self) -> BTreeMap<Bidegree, usize> {
        let s = self.variance.sign();
        self.dims.iter().map(|(&(p, q), &d)| ((s * p, s * q), d)).collect()
    }

    /// Blocks keyed by user-convention source bidegree.
    pub fn blocks(&self, which: &str) -> BTreeMap<Bidegree, CMatrix> {
        let s = self.variance.sign();
        let map = match which {
            "del" => &self.del,
            "delbar" => &self.delbar,
            _ => &self.sigma,
        };
        map.iter().map(|(&(p, q), m)| ((s * p, s * q), m.clone())).collect()
    }

    /// Complex dimension of `∂̄`-cohomology at a bidegree (caller's variance).
    pub fn dbar_cohomology_dim(&self, b: Bidegree) -> usize {
        let s = self.variance.sign();
        let st = (s * b.0, s * b.1);
        let dim = self.dim_h(st);
        let out = self.delbar.get(&st).map_or(0, |m| m.rank());
        let inc = self.delbar.get(&(st.0, st.1 + 1)).map_or(0, |m| m.rank());
        dim - out - inc
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Stored (homological) dimension at a bidegree.
    pub fn dim_h(&self, b: Bidegree) -> usize {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    /// Stored degree range `(min, max)`, or `None` if empty.
    pub fn degree_range_h(&self) -> Option<(i64, i64)> {
        let degs: BTreeSet<i64> = self.dims.keys().map(|(p, q)| p + q).collect();
        Some((*degs.first()?, *degs.last()?))
    }

    /// Range of stored first indices.
    pub fn index_range_h(&self) -> Option<(i64, i64)> {
        let idx: BTreeSet<i64> = self.dims.keys().flat_map(|&(p, q)| [p, q]).collect();
        Some((*idx.first()?, *idx.last()?))
    }

    pub fn layout_h(&self, n: i64) -> Layout {
        let mut blocks = Vec::new();
        let mut off = 0;
        for (&(p, q), &d) in &self.dims {
            if p + q == n {
                blocks.push(((p, q), off, d));
                off += d;
            }
        }
        Layout { blocks, total: off }
    }

    pub fn degree_dim_h(&self, n: i64) -> usize {
        self.layout_h(n).total
    }

    fn assemble(
        &self,
        src_deg: i64,
        dst_deg: i64,
        map: &BTreeMap<Bidegree, CMatrix>,
        target: impl Fn(Bidegree) -> Bidegree,
    ) -> CMatrix {
        let (src, dst) = (self.layout_h(src_deg), self.layout_h(dst_deg));
        let mut m = CMatrix::zeros(dst.total, src.total);
        for &(b, so, sd) in &src.blocks {
            let Some(block) = map.get(&b) else { continue };
            let Some((to, td)) = dst.offset(target(b)) else { continue };
            for i in 0..td {
                for j in 0..sd {
                    m.set(to + i, so + j, block.get(i, j).clone());
                }
            }
        }
        m
    }

    /// `∂ : A_n → A_{n-1}` (stored degrees).
    pub fn del_h(&self, n: i64) -> CMatrix {
        self.assemble(n, n - 1, &self.del, |(p, q)| (p - 1, q))
    }

    pub fn delbar_h(&self, n: i64) -> CMatrix {
        self.assemble(n, n - 1, &self.delbar, |(p, q)| (p, q - 1))
    }

    pub fn d_h(&self, n: i64) -> CMatrix {
        self.del_h(n).add(&self.delbar_h(n))
    }

    /// Matrix `S` of `σ` on `A_n`, so that `σ(x) = S·x̄`.
    pub fn sigma_h(&self, n: i64) -> CMatrix {
        self.assemble(n, n, &self.sigma, |(p, q)| (q, p))
    }

    /// `σ` as a rational matrix on the realification `(re, im)` of `A_n`.
    pub fn sigma_real_h(&self, n: i64) -> QMatrix {
        let m = self.degree_dim_h(n);
        let mut flip = QMatrix::identity(2 * m);
        for k in m..2 * m {
            flip.set(k, k, q(-1, 1));
        }
        self.sigma_h(n).realify().mul(&flip)
    }

    /// Diagonal projection onto the blocks `(l, l')` of `A_n` selected by `keep`.
    pub fn block_projection_h(&self, n: i64, keep: impl Fn(Bidegree) -> bool) -> CMatrix {
        let lay = self.layout_h(n);
        let mut m = CMatrix::zeros(lay.total, lay.total);
        for &(b, o, d) in &lay.blocks {
            if keep(b) {
                for k in o..o + d {
                    m.set(k, k, Scalar::one());
                }
            }
        }
        m
    }

    /// `F_{k,k'}` on `A_n`: keep components with `l ≤ k` and `l' ≤ k'`.
    pub fn fkk_h(&self, n: i64, k: i64, k2: i64) -> CMatrix {
        self.block_projection_h(n, |(l, l2)| l <= k && l2 <= k2)
    }

    /// `F_k` on `A_n` (first index `≤ k`).
    pub fn f_h(&self, n: i64, k: i64) -> CMatrix {
        self.block_projection_h(n, |(l, _)| l <= k)
    }

    /// Conjugate filtration `F̄_k` (second index `≤ k`).
    pub fn fbar_h(&self, n: i64, k: i64) -> CMatrix {
        self.block_projection_h(n, |(_, l2)| l2 <= k)
    }

    /// Restriction to the single block `b` of `A_n`.
    pub fn component_h(&self, n: i64, b: Bidegree) -> CMatrix {
        self.block_projection_h(n, |c| c == b)
    }

    /// `π_p = ½(1 + (-1)^p σ)` on the realification of `A_n`.
    pub fn pi_real_h(&self, n: i64, p: i64) -> QMatrix {
        let m = self.degree_dim_h(n);
        let s = self.sigma_real_h(n).scale(&q(if p.rem_euclid(2) == 0 { 1 } else { -1 }, 1));
        QMatrix::identity(2 * m).add(&s).scale(&q(1, 2))
    }

    /// Rational subspace `A_n^ℝ(p) = {x : σx = (-1)^p x}` (stored degree).
    pub fn real_subspace_h(&self, n: i64, p: i64) -> QSubspace {
        QSubspace::span_of(&self.pi_real_h(n, p))
    }

    /// `F_p A_n` in the complex's own variance, realified.
    pub fn hodge_filtration(&self, p: i64, n: i64) -> QSubspace {
        let s = self.variance.sign();
        let (n, p) = (s * n, s * p);
        QSubspace::span_of(&self.f_h(n, p).realify())
    }

    pub fn real_subspace(&self, n: i64, p: i64) -> QSubspace {
        let s = self.variance.sign();
        self.real_subspace_h(s * n, s * p)
    }

    /// Bidegree pieces as the user sees them.
    pub fn to_user(&self, b: Bidegree) -> Bidegree {
        let s = self.variance.sign();
        (s * b.0, s * b.1)
    }
}

/// Every violated identity, by name. Empty iff the complex is valid.
pub fn validate_dolbeault(a: &BigradedComplex) -> Vec<String> {
    let mut report = BTreeSet::new();
    for (&(p, q), &d) in &a.dims {
        if a.dim_h((q, p)) != d {
            report.insert("conjugation symmetry".to_string());
        }
    }
    let Some((lo, hi)) = a.degree_range_h() else {
        return Vec::new();
    };
    for n in lo..=hi + 1 {
        let (del, delbar) = (a.del_h(n), a.delbar_h(n));
        let (del1, delbar1) = (a.del_h(n - 1), a.delbar_h(n - 1));
        if !del1.mul(&del).is_zero() {
            report.insert("del-squared".to_string());
        }
        if !delbar1.mul(&delbar).is_zero() {
            report.insert("delbar-squared".to_string());
        }
        if !del1.mul(&delbar).add(&delbar1.mul(&del)).is_zero() {
            report.insert("anticommute".to_string());
        }
        let s = a.sigma_h(n);
        let m = s.rows();
        if s.mul(&s.conj()) != CMatrix::identity(m) {
            report.insert("sigma involution".to_string());
        }
        let s1 = a.sigma_h(n - 1);
        if s1.mul(&del.conj()) != delbar.mul(&s) {
            report.insert("sigma exchanges differentials".to_string());
        }
    }
    report.into_iter().collect()
}

/// Element of a single degree, stored as one coordinate vector per bidegree
/// in the owning complex's own variance.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedVector {
    pub variance: Variance,
    pub degree: i64,
    pub components: BTreeMap<Bidegree, Vec<Scalar>>,
}

impl TwistedVector {
    pub fn zero(variance: Variance, degree: i64) -> Self {
        TwistedVector { variance, degree, components: BTreeMap::new() }
    }

    /// Flatten into the coordinates of the stored degree of `a`.
    pub fn to_coords(&self, a: &BigradedComplex) -> Vec<Scalar> {
        let s = a.variance.sign();
        let lay = a.layout_h(s * self.degree);
        let mut v = vec![Scalar::zero(); lay.total];
        for (&b, comp) in &self.components {
            let (o, d) = lay
                .offset((s * b.0, s * b.1))
                .unwrap_or_else(|| panic!("component at {b:?} outside the support"));
            assert_eq!(comp.len(), d, "component length mismatch at {b:?}");
            v[o..o + d].clone_from_slice(comp);
        }
        v
    }

    pub fn from_coords(a: &BigradedComplex, degree: i64, v: &[Scalar]) -> Self {
        let s = a.variance.sign();
        let lay = a.layout_h(s * degree);
        assert_eq!(v.len(), lay.total);
        let components = lay
            .blocks
            .iter()
            .filter(|(_, o, d)| v[*o..o + d].iter().any(|x| !x.is_zero()))
            .map(|&(b, o, d)| (a.to_user(b), v[o..o + d].to_vec()))
            .collect();
        TwistedVector { variance: a.variance, degree, components }
    }
}

/// Sum of the components `x_{l,l'}` with `l ≤ k` and `l' ≤ k'` (homological),
/// or `l ≥ k`, `l' ≥ k'` for a cohomological vector.
pub fn project_fkk(x: &TwistedVector, k: i64, k2: i64) -> TwistedVector {
    let keep = |(l, l2): Bidegree| match x.variance {
        Variance::Homological => l <= k && l2 <= k2,
        Variance::Cohomological => l >= k && l2 >= k2,
    };
    TwistedVector {
        variance: x.variance,
        degree: x.degree,
        components: x.components.iter().filter(|(b, _)| keep(**b)).map(|(b, v)| (*b, v.clone())).collect(),
    }
}

/// `π_p(x) = ½(x + (-1)^p σx)`.
pub fn project_pi(a: &BigradedComplex, x: &TwistedVector, p: i64) -> TwistedVector {
    let v = x.to_coords(a);
    let s = a.sigma_h(a.variance.sign() * x.degree);
    let conj: Vec<Scalar> = v.iter().map(Scalar::conj).collect();
    let sv = s.apply(&conj);
    let half = Scalar::from_ratio(1, 2);
    let sign = Scalar::sign(p);
    let out: Vec<Scalar> = v.iter().zip(&sv).map(|(a, b)| &half * &(a + &(&sign * b))).collect();
    TwistedVector::from_coords(a, x.degree, &out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> BigradedComplex {
        let dims = BTreeMap::from([((0, 0), 1), ((1, 1), 1)]);
        let sigma = BTreeMap::from([
            ((0, 0), CMatrix::identity(1)),
            ((1, 1), CMatrix::identity(1)),
        ]);
        BigradedComplex::new("P1", Variance::Cohomological, Some(1), dims, BTreeMap::new(), BTreeMap::new(), sigma)
            .unwrap()
    }

    #[test]
    fn p1_is_valid_and_filtration_reads_support() {
        let a = p1();
        assert!(validate_dolbeault(&a).is_empty());
        assert_eq!(a.hodge_filtration(1, 2).dim(), 2);
        assert_eq!(a.hodge_filtration(2, 2).dim(), 0);
        assert_eq!(a.hodge_filtration(0, 0).dim(), 2);
    }

    #[test]
    fn real_subspace_of_top_class_is_imaginary_line() {
        let a = p1();
        let r = a.real_subspace(2, 1);
        assert_eq!(r.dim(), 1);
        // coordinates (re, im): i·ω is (0, 1)
        assert!(r.contains(&[q(0, 1), q(1, 1)]));
        assert_eq!(r.intersection(&a.real_subspace(2, 2)).dim(), 0);
    }

    #[test]
    fn violations_are_named() {
        let dims = BTreeMap::from([((1, 0), 1)]);
        let a = BigradedComplex::new("bad", Variance::Homological, None, dims, BTreeMap::new(), BTreeMap::new(), BTreeMap::new())
            .unwrap();
        assert!(validate_dolbeault(&a).contains(&"conjugation symmetry".to_string()));

        let dims = BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((2, 0), 1), ((0, 1), 1), ((0, 2), 1)]);
        let one = CMatrix::identity(1);
        let del = BTreeMap::from([((1, 0), one.clone()), ((2, 0), one.clone())]);
        let a = BigradedComplex::new("bad", Variance::Homological, None, dims, del, BTreeMap::new(), BTreeMap::new())
            .unwrap();
        let r = validate_dolbeault(&a);
        assert!(r.contains(&"del-squared".to_string()));
    }

    #[test]
    fn shape_errors_name_the_block() {
        let dims = BTreeMap::from([((0, 0), 1)]);
        let sigma = BTreeMap::from([((0, 0), CMatrix::identity(2))]);
        let e = BigradedComplex::new("x", Variance::Homological, None, dims, BTreeMap::new(), BTreeMap::new(), sigma)
            .unwrap_err();
        assert!(matches!(e, ComplexError::Shape { ref block, .. } if block == "sigma"));
    }

    #[test]
    fn projections() {
        let a = p1();
        let mut x = TwistedVector::zero(Variance::Cohomological, 2);
        x.components.insert((1, 1), vec![Scalar::i()]);
        assert_eq!(project_pi(&a, &x, 1), x);
        assert_eq!(project_pi(&a, &x, 0).components.len(), 0);
        let mut y = TwistedVector::zero(Variance::Homological, 0);
        y.components.insert((0, 0), vec![Scalar::one()]);
        y.components.insert((1, 1), vec![Scalar::one()]);
        let z = project_fkk(&y, 0, 0);
        assert_eq!(z.components.keys().copied().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(project_fkk(&y, 5, 5), y);
        assert!(project_fkk(&y, -1, 9).components.is_empty());
    }
}
