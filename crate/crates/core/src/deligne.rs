//! Deligne complexes, the mapping cone, the homotopy equivalence between
//! them, and homology.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dolbeault::{validate_dolbeault, BigradedComplex, ComplexError, Variance};
use crate::exactnum::{complexify_vec, q, realify_vec, CMatrix, Field, QMatrix, QSubspace, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeligneError {
    #[error(transparent)]
    InvalidComplex(#[from] ComplexError),
    #[error("homotopy identity failed: {0}")]
    HomotopyIdentityFailure(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("map does not land in the target complex: {0}")]
    NotInTarget(String),
}

pub(crate) fn ensure_valid(a: &BigradedComplex) -> Result<(), DeligneError> {
    let report = validate_dolbeault(a);
    if report.is_empty() {
        Ok(())
    } else {
        Err(ComplexError::Invalid(report).into())
    }
}

/// Finite chain complex of rational vector spaces, `d_n : C_n → C_{n-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    pub dims: BTreeMap<i64, usize>,
    pub d: BTreeMap<i64, QMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Homology {
    pub degree: i64,
    pub dim: usize,
    /// Representative cycles, one column per class.
    pub reps: QMatrix,
    pub cycles: QSubspace,
    pub boundaries: QSubspace,
}

impl Homology {
    /// Coordinates of the class of a cycle in the basis `reps`.
    pub fn class_of(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let m = self.reps.hstack(self.boundaries.basis());
        let x = m.solve(&QMatrix::from_columns(v.len(), &[v.to_vec()]))?;
        Some((0..self.dim).map(|k| x.get(k, 0).clone()).collect())
    }

    /// Class coordinates of each column of `m`.
    pub fn classes_of(&self, m: &QMatrix) -> Option<QMatrix> {
        let x = self.reps.hstack(self.boundaries.basis()).solve(m)?;
        Some(x.select_rows(&(0..self.dim).collect::<Vec<_>>()))
    }
}

impl ChainComplex {
    pub fn dim(&self, n: i64) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    /// `d_n`, zero-filled where absent.
    pub fn diff(&self, n: i64) -> QMatrix {
        self.d.get(&n).cloned().unwrap_or_else(|| QMatrix::zeros(self.dim(n - 1), self.dim(n)))
    }

    pub fn range(&self) -> Option<(i64, i64)> {
        let nz: Vec<i64> = self.dims.iter().filter(|(_, &d)| d > 0).map(|(&n, _)| n).collect();
        Some((*nz.first()?, *nz.last()?))
    }

    /// Degrees `n` with `d_{n-1} d_n ≠ 0`.
    pub fn d_squared_failures(&self) -> Vec<i64> {
        let Some((lo, hi)) = self.range() else { return Vec::new() };
        (lo..=hi + 1).filter(|&n| !self.diff(n - 1).mul(&self.diff(n)).is_zero()).collect()
    }

    pub fn homology(&self, n: i64) -> Homology {
        let cycles = QSubspace::span_of(&self.diff(n).kernel());
        let boundaries = QSubspace::span_of(&self.diff(n + 1));
        let reps = cycles.quotient(&boundaries).expect("boundaries are cycles").basis().clone();
        Homology { degree: n, dim: reps.cols(), reps, cycles, boundaries }
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        let Some((lo, hi)) = self.range() else { return BTreeMap::new() };
        (lo..=hi).map(|n| (n, self.homology(n).dim)).collect()
    }

    /// Shift so that `C'_n = C_{n+k}`, with the differential multiplied by `sign`.
    pub fn shifted(&self, k: i64, sign: i64) -> ChainComplex {
        let s = q(sign, 1);
        ChainComplex {
            dims: self.dims.iter().map(|(&n, &d)| (n - k, d)).collect(),
            d: self.d.iter().map(|(&n, m)| (n - k, m.scale(&s))).collect(),
        }
    }
}

/// A complex of rational subspaces embedded in realified ambient spaces,
/// with its induced chain complex on basis coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedComplex {
    pub spaces: BTreeMap<i64, QSubspace>,
    /// Differential on ambient spaces.
    pub ambient_d: BTreeMap<i64, QMatrix>,
    pub chain: ChainComplex,
}

impl EmbeddedComplex {
    fn build(spaces: BTreeMap<i64, QSubspace>, ambient_d: BTreeMap<i64, QMatrix>) -> Result<Self, DeligneError> {
        let mut chain = ChainComplex { dims: BTreeMap::new(), d: BTreeMap::new() };
        for (&n, s) in &spaces {
            chain.dims.insert(n, s.dim());
        }
        for (&n, m) in &ambient_d {
            let (Some(src), Some(dst)) = (spaces.get(&n), spaces.get(&(n - 1))) else { continue };
            let img = m.mul(src.basis());
            let coords = dst
                .coordinates_of(&img)
                .ok_or_else(|| DeligneError::NotInTarget(format!("differential out of degree {n}")))?;
            chain.d.insert(n, coords);
        }
        Ok(EmbeddedComplex { spaces, ambient_d, chain })
    }

    pub fn space(&self, n: i64) -> QSubspace {
        self.spaces.get(&n).cloned().unwrap_or_else(|| QSubspace::zero(0))
    }

    /// Express an ambient-level map between two embedded complexes in basis
    /// coordinates.
    pub fn coords_of_map(&self, n: i64, ambient_map: &QMatrix, target: &EmbeddedComplex, tn: i64) -> Result<QMatrix, DeligneError> {
        let src = self.space(n);
        let dst = target.space(tn);
        if src.dim() == 0 {
            return Ok(QMatrix::zeros(dst.dim(), 0));
        }
        dst.coordinates_of(&ambient_map.mul(src.basis()))
            .ok_or_else(|| DeligneError::NotInTarget(format!("map out of degree {n}")))
    }
}

/// `D(A, p)`. Degrees and `p` are stored homologically; `variance` and
/// `p_user` record how the caller indexes them.
#[derive(Clone, Debug, PartialEq)]
pub struct DeligneComplex {
    pub variance: Variance,
    pub p_user: i64,
    pub p: i64,
    pub complex: EmbeddedComplex,
}

impl DeligneComplex {
    pub fn chain(&self) -> &ChainComplex {
        &self.complex.chain
    }

    /// `true` if `D_n` sits inside `A_{n+1}` rather than `A_n`.
    pub fn shifted_at(&self, n: i64) -> bool {
        n > 2 * self.p
    }

    /// Homology dimensions keyed by the caller's degree convention.
    pub fn homology_table(&self) -> BTreeMap<i64, usize> {
        let s = self.variance.sign();
        self.chain().homology_dims().into_iter().map(|(n, d)| (s * n, d)).collect()
    }

    pub fn dims_table(&self) -> BTreeMap<i64, usize> {
        let s = self.variance.sign();
        self.chain().dims.iter().filter(|(_, &d)| d > 0).map(|(&n, &d)| (s * n, d)).collect()
    }
}

fn realify(m: &crate::exactnum::CMatrix) -> QMatrix {
    m.realify()
}

fn window(a: &BigradedComplex) -> Option<(i64, i64)> {
    a.degree_range_h().map(|(lo, hi)| (lo - 1, hi))
}

/// `D(A,p)` with stored degree and weight.
pub fn build_deligne_h(a: &BigradedComplex, p: i64) -> Result<EmbeddedComplex, DeligneError> {
    let mut spaces = BTreeMap::new();
    let mut ambient_d = BTreeMap::new();
    let Some((lo, hi)) = window(a) else {
        return EmbeddedComplex::build(spaces, ambient_d);
    };
    for n in lo..=hi {
        if n <= 2 * p {
            let fpp = QSubspace::span_of(&realify(&a.fkk_h(n, p, p)));
            spaces.insert(n, a.real_subspace_h(n, p).intersection(&fpp));
            ambient_d.insert(n, realify(&a.d_h(n)));
        } else {
            let f = QSubspace::span_of(&realify(&a.fkk_h(n + 1, n - p, n - p)));
            spaces.insert(n, a.real_subspace_h(n + 1, p + 1).intersection(&f));
            let d = if n == 2 * p + 1 {
                realify(&a.del_h(n).mul(&a.delbar_h(n + 1))).scale(&q(-2, 1))
            } else {
                realify(&a.fkk_h(n, n - p - 1, n - p - 1).mul(&a.d_h(n + 1))).scale(&q(-1, 1))
            };
            ambient_d.insert(n, d);
        }
    }
    EmbeddedComplex::build(spaces, ambient_d)
}

/// `D(A, p)` with `p` and degrees in the complex's own variance.
pub fn build_deligne(a: &BigradedComplex, p: i64) -> Result<DeligneComplex, DeligneError> {
    ensure_valid(a)?;
    let ph = a.variance.sign() * p;
    Ok(DeligneComplex { variance: a.variance, p_user: p, p: ph, complex: build_deligne_h(a, ph)? })
}

/// Sign convention of the cone differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeSign {
    /// `d(a,f,ω) = (da, df, u(a,f) − dω)`.
    UMinusDOmega,
    /// `d(a,f,ω) = (da, df, −u(a,f) + dω)`.
    DOmegaMinusU,
}

impl ConeSign {
    pub fn describe(self) -> &'static str {
        match self {
            ConeSign::UMinusDOmega => "d(a,f,w) = (da, df, -a+f-dw)",
            ConeSign::DOmegaMinusU => "d(a,f,w) = (da, df, a-f+dw)",
        }
    }
}

/// Cone of `u(a,f) = −a+f : A^ℝ(p) ⊕ F_pA → A`, stored homologically with
/// `C_n = A^ℝ_n(p) ⊕ F_pA_n ⊕ A_{n+1}` realified.
#[derive(Clone, Debug, PartialEq)]
pub struct ConeComplex {
    pub variance: Variance,
    pub p: i64,
    pub sign: ConeSign,
    pub complex: EmbeddedComplex,
}

impl ConeComplex {
    pub fn homology_table(&self) -> BTreeMap<i64, usize> {
        let s = self.variance.sign();
        self.complex.chain.homology_dims().into_iter().map(|(n, d)| (s * n, d)).collect()
    }
}

fn block3(a: &QMatrix, b: &QMatrix, c: &QMatrix) -> QMatrix {
    a.direct_sum(b).direct_sum(c)
}

pub fn build_cone_h(a: &BigradedComplex, p: i64, sign: ConeSign) -> Result<EmbeddedComplex, DeligneError> {
    let mut spaces = BTreeMap::new();
    let mut ambient_d = BTreeMap::new();
    let Some((lo, hi)) = window(a) else {
        return EmbeddedComplex::build(spaces, ambient_d);
    };
    let s = match sign {
        ConeSign::UMinusDOmega => q(1, 1),
        ConeSign::DOmegaMinusU => q(-1, 1),
    };
    for n in lo..=hi + 1 {
        let m = a.degree_dim_h(n);
        let real = a.real_subspace_h(n, p);
        let fp = QSubspace::span_of(&realify(&a.f_h(n, p)));
        let top = QMatrix::identity(2 * a.degree_dim_h(n + 1));
        let basis = block3(real.basis(), fp.basis(), &top);
        spaces.insert(n, QSubspace::span_of(&basis));
        // d : C_n → C_{n-1}
        let m1 = a.degree_dim_h(n - 1);
        let dn = realify(&a.d_h(n));
        let dn1 = realify(&a.d_h(n + 1));
        let zero = |r: usize, c: usize| QMatrix::zeros(2 * r, 2 * c);
        let row1 = dn.hstack(&zero(m1, m)).hstack(&zero(m1, a.degree_dim_h(n + 1)));
        let row2 = zero(m1, m).hstack(&dn).hstack(&zero(m1, a.degree_dim_h(n + 1)));
        let id = QMatrix::identity(2 * m);
        let row3 = id.scale(&(-&s)).hstack(&id.scale(&s)).hstack(&dn1.scale(&(-&s)));
        ambient_d.insert(n, row1.vstack(&row2).vstack(&row3));
    }
    EmbeddedComplex::build(spaces, ambient_d)
}

pub fn build_cone(a: &BigradedComplex, p: i64) -> Result<ConeComplex, DeligneError> {
    build_cone_with(a, p, ConeSign::UMinusDOmega)
}

pub fn build_cone_with(a: &BigradedComplex, p: i64, sign: ConeSign) -> Result<ConeComplex, DeligneError> {
    ensure_valid(a)?;
    let ph = a.variance.sign() * p;
    let complex = build_cone_h(a, ph, sign)?;
    if let Some(n) = complex.chain.d_squared_failures().first() {
        return Err(DeligneError::NotInTarget(format!("cone differential squares to nonzero in degree {n}")));
    }
    Ok(ConeComplex { variance: a.variance, p: ph, sign, complex })
}

/// Ambient-level matrices of `φ : D → C`, `ψ : C → D`, `h : C_n → C_{n+1}`.
pub struct AmbientHomotopy {
    pub phi: BTreeMap<i64, QMatrix>,
    pub psi: BTreeMap<i64, QMatrix>,
    pub h: BTreeMap<i64, QMatrix>,
}

fn zeros2(rr: usize, cc: usize) -> QMatrix {
    QMatrix::zeros(2 * rr, 2 * cc)
}

/// `φ` on the ambient of `D_n(A,p)`, stored indices.
pub fn phi_h(a: &BigradedComplex, p: i64, n: i64) -> QMatrix {
    let (mn, mn1) = (a.degree_dim_h(n), a.degree_dim_h(n + 1));
    if n <= 2 * p {
        let id = QMatrix::identity(2 * mn);
        id.vstack(&id).vstack(&zeros2(mn1, mn))
    } else {
        let c1 = a.component_h(n + 1, (p + 1, n - p));
        let c2 = a.component_h(n + 1, (n - p, p + 1));
        let del = a.del_h(n + 1);
        let first = del.mul(&c1).sub(&a.delbar_h(n + 1).mul(&c2)).realify();
        let second = del.mul(&c1).realify().scale(&q(2, 1));
        first.vstack(&second).vstack(&QMatrix::identity(2 * mn1))
    }
}

/// `ψ` from the ambient of the cone in degree `n` to the ambient of `D_n(A,p)`.
pub fn psi_h(a: &BigradedComplex, p: i64, n: i64) -> QMatrix {
    let (mn, mn1) = (a.degree_dim_h(n), a.degree_dim_h(n + 1));
    if n > 2 * p {
        let w = a.pi_real_h(n + 1, p + 1).mul(&a.fkk_h(n + 1, n - p, n - p).realify());
        zeros2(mn1, mn).hstack(&zeros2(mn1, mn)).hstack(&w)
    } else {
        let c = a.component_h(n + 1, (p + 1, n - p));
        let w = a.pi_real_h(n, p).mul(&a.del_h(n + 1).mul(&c).realify()).scale(&q(2, 1));
        a.fkk_h(n, p, p).realify().hstack(&zeros2(mn, mn)).hstack(&w)
    }
}

/// `h` from the cone in degree `n` to the cone in degree `n+1`.
pub fn h_h(a: &BigradedComplex, p: i64, n: i64) -> QMatrix {
    let (mn, mn1, mn2) = (a.degree_dim_h(n), a.degree_dim_h(n + 1), a.degree_dim_h(n + 2));
    let r = |m: crate::exactnum::CMatrix| m.realify();
    let pi_p = a.pi_real_h(n + 1, p);
    let pi_p1 = a.pi_real_h(n + 1, p + 1);
    let (h1, h2) = if n > 2 * p {
        let h1 = pi_p.mul(&r(a.fbar_h(n + 1, p).add(&a.fbar_h(n + 1, n - p))));
        let h2 = r(a.f_h(n + 1, p)).mul(&pi_p1).scale(&q(-2, 1));
        (h1, h2)
    } else {
        let h1 = pi_p.mul(&r(a.fbar_h(n + 1, n - p))).scale(&q(2, 1));
        let h2 = r(a.fkk_h(n + 1, p, p))
            .scale(&q(-1, 1))
            .sub(&r(a.f_h(n + 1, n - p)).mul(&pi_p1).scale(&q(2, 1)));
        (h1, h2)
    };
    let left = zeros2(mn1, mn).hstack(&zeros2(mn1, mn));
    left.hstack(&h1)
        .vstack(&left.hstack(&h2))
        .vstack(&zeros2(mn2, mn).hstack(&zeros2(mn2, mn)).hstack(&zeros2(mn2, mn1)))
}

/// The displayed formulas for `φ`, `ψ` and `h`, at stored weight `p`.
pub fn ambient_homotopy(a: &BigradedComplex, p: i64, lo: i64, hi: i64) -> AmbientHomotopy {
    let mut out = AmbientHomotopy { phi: BTreeMap::new(), psi: BTreeMap::new(), h: BTreeMap::new() };
    for n in lo..=hi {
        out.phi.insert(n, phi_h(a, p, n));
        out.psi.insert(n, psi_h(a, p, n));
        out.h.insert(n, h_h(a, p, n));
    }
    out
}

/// Coordinate matrices of the homotopy data together with the certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyMaps {
    pub p: i64,
    pub sign: ConeSign,
    pub phi: BTreeMap<i64, QMatrix>,
    pub psi: BTreeMap<i64, QMatrix>,
    pub h: BTreeMap<i64, QMatrix>,
    pub deligne: EmbeddedComplex,
    pub cone: EmbeddedComplex,
    /// Degrees checked for each identity.
    pub checked_degrees: Vec<i64>,
}

fn certify(a: &BigradedComplex, p: i64, sign: ConeSign) -> Result<HomotopyMaps, DeligneError> {
    let deligne = build_deligne_h(a, p)?;
    let cone = build_cone_h(a, p, sign)?;
    let (lo, hi) = window(a).unwrap_or((0, -1));
    let amb = ambient_homotopy(a, p, lo - 1, hi + 1);
    let mut maps = HomotopyMaps {
        p,
        sign,
        phi: BTreeMap::new(),
        psi: BTreeMap::new(),
        h: BTreeMap::new(),
        deligne,
        cone,
        checked_degrees: Vec::new(),
    };
    let fail = |what: &str, n: i64| DeligneError::HomotopyIdentityFailure(format!("{what} in degree {n}"));
    for n in lo..=hi + 1 {
        maps.phi.insert(n, maps.deligne.coords_of_map(n, &amb.phi[&n], &maps.cone, n).map_err(|_| fail("phi leaves the cone", n))?);
        maps.psi.insert(n, maps.cone.coords_of_map(n, &amb.psi[&n], &maps.deligne, n).map_err(|_| fail("psi leaves the Deligne complex", n))?);
        maps.h.insert(n, maps.cone.coords_of_map(n, &amb.h[&n], &maps.cone, n + 1).map_err(|_| fail("h leaves the cone", n))?);
    }
    maps.h.insert(lo - 1, QMatrix::zeros(maps.cone.chain.dim(lo), maps.cone.chain.dim(lo - 1)));
    let (dc, cc) = (&maps.deligne.chain, &maps.cone.chain);
    for n in lo..=hi + 1 {
        let psiphi = maps.psi[&n].mul(&maps.phi[&n]);
        if psiphi != QMatrix::identity(dc.dim(n)) {
            return Err(fail("psi o phi != id", n));
        }
        let lhs = maps.phi[&n].mul(&maps.psi[&n]).sub(&QMatrix::identity(cc.dim(n)));
        let rhs = cc.diff(n + 1).mul(&maps.h[&n]).add(&maps.h[&(n - 1)].mul(&cc.diff(n)));
        if lhs != rhs {
            return Err(fail("phi o psi - id != dh + hd", n));
        }
        if n > lo {
            if cc.diff(n).mul(&maps.phi[&n]) != maps.phi[&(n - 1)].mul(&dc.diff(n)) {
                return Err(fail("phi is not a chain map", n));
            }
            if dc.diff(n).mul(&maps.psi[&n]) != maps.psi[&(n - 1)].mul(&cc.diff(n)) {
                return Err(fail("psi is not a chain map", n));
            }
        }
        maps.checked_degrees.push(n);
    }
    Ok(maps)
}

/// Build `φ, ψ, h` and certify `ψφ = Id`, `φψ − Id = dh + hd` exactly.
/// The first cone convention that certifies is returned.
pub fn homotopy_maps(a: &BigradedComplex, p: i64) -> Result<HomotopyMaps, DeligneError> {
    ensure_valid(a)?;
    let ph = a.variance.sign() * p;
    match certify(a, ph, ConeSign::UMinusDOmega) {
        Ok(m) => Ok(m),
        Err(first) => certify(a, ph, ConeSign::DOmegaMinusU).map_err(|_| first),
    }
}

/// `A^ℝ(p)` as a chain complex with differential `sign·d_A` (stored degrees).
pub fn real_twisted_complex_h(a: &BigradedComplex, p: i64, sign: i64) -> Result<EmbeddedComplex, DeligneError> {
    let mut spaces = BTreeMap::new();
    let mut ambient_d = BTreeMap::new();
    if let Some((lo, hi)) = a.degree_range_h() {
        for n in lo..=hi {
            spaces.insert(n, a.real_subspace_h(n, p));
            ambient_d.insert(n, a.d_h(n).realify().scale(&q(sign, 1)));
        }
    }
    EmbeddedComplex::build(spaces, ambient_d)
}

/// Which closed form `D(A,p)` takes when `p` lies outside the support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegenerateRange {
    /// Every stored index `≤ p`: `D(A,p) = A^ℝ(p)`.
    RealComplex,
    /// Every stored index `> p`: `D(A,p) = A^ℝ(p+1)[1]` with `−d_A`.
    ShiftedRealComplex,
    Inside,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegenerateCheck {
    pub p: i64,
    pub range: DegenerateRange,
    pub deligne: BTreeMap<i64, usize>,
    pub real: BTreeMap<i64, usize>,
    /// Same subspaces in every degree, not just the same homology.
    pub same_spaces: bool,
    pub equal: bool,
}

/// Classify `p` (caller's variance) against the support of `a`.
pub fn degenerate_range(a: &BigradedComplex, p: i64) -> DegenerateRange {
    let s = a.variance.sign();
    let ph = s * p;
    let stored: Vec<i64> = a.dims().keys().flat_map(|&(x, y)| [s * x, s * y]).collect();
    let (hi, lo) = (stored.iter().max().copied(), stored.iter().min().copied());
    match (hi, lo) {
        (Some(h), _) if h <= ph => DegenerateRange::RealComplex,
        (_, Some(l)) if l > ph => DegenerateRange::ShiftedRealComplex,
        (None, None) => DegenerateRange::RealComplex,
        _ => DegenerateRange::Inside,
    }
}

/// Compare `D(A,p)` with the twisted real complex it degenerates to; for
/// `p` inside the support both tables are still reported, `equal` is then
/// informational.
pub fn degenerate_range_check(a: &BigradedComplex, p: i64) -> Result<DegenerateCheck, DeligneError> {
    ensure_valid(a)?;
    let s = a.variance.sign();
    let ph = s * p;
    let range = degenerate_range(a, p);
    let d = build_deligne_h(a, ph)?;
    let (real, shift) = match range {
        DegenerateRange::ShiftedRealComplex => (real_twisted_complex_h(a, ph + 1, -1)?, 1),
        _ => (real_twisted_complex_h(a, ph, 1)?, 0),
    };
    let real_chain = real.chain.shifted(shift, 1);
    let user = |m: BTreeMap<i64, usize>| m.into_iter().map(|(n, k)| (s * n, k)).collect::<BTreeMap<_, _>>();
    let dt = user(d.chain.homology_dims());
    let rt = user(real_chain.homology_dims());
    let same_spaces = d.spaces.iter().all(|(&n, sp)| {
        let other = real.spaces.get(&(n + shift));
        match other {
            Some(o) => o.equals(sp),
            None => sp.dim() == 0,
        }
    });
    let nonzero = |m: &BTreeMap<i64, usize>| m.iter().filter(|(_, &k)| k > 0).map(|(&n, &k)| (n, k)).collect::<Vec<_>>();
    let equal = nonzero(&dt) == nonzero(&rt);
    Ok(DegenerateCheck { p, range, deligne: dt, real: rt, same_spaces, equal })
}

/// Left action of forms on a module (possibly the forms themselves), in
/// stored degrees: `x ∈ E_k` sends `M_j` to `M_{j+k}`.
pub trait FormAction {
    fn forms(&self) -> &BigradedComplex;
    fn module(&self) -> &BigradedComplex;
    /// Matrix of `y ↦ x·y` from `M_j` to `M_{j+k}`.
    fn left(&self, k: i64, x: &[Scalar], j: i64) -> CMatrix;
}

/// Split a realified cone vector of degree `n` into `(r, f, ω)` as complex
/// vectors.
fn split_cone(a: &BigradedComplex, n: i64, v: &[Rational]) -> [Vec<Scalar>; 3] {
    let (m, m1) = (2 * a.degree_dim_h(n), 2 * a.degree_dim_h(n + 1));
    assert_eq!(v.len(), 2 * m + m1, "cone vector of wrong length");
    [complexify_vec(&v[..m]), complexify_vec(&v[m..2 * m]), complexify_vec(&v[2 * m..])]
}

fn combine(x: &[Scalar], y: &[Scalar], cx: &Scalar, cy: &Scalar) -> Vec<Scalar> {
    x.iter().zip(y).map(|(a, b)| &(cx * a) + &(cy * b)).collect()
}

/// Product on cones: `(r1,f1,ω1)·(r2,f2,ω2) = (r1r2, f1f2,
/// ω1(αr2 + (1−α)f2) + (−1)^{n1}((1−α)r1 + αf1)ω2)`.
pub fn cone_product_h<A: FormAction + ?Sized>(act: &A, n1: i64, x: &[Rational], n2: i64, y: &[Rational], alpha: &Rational) -> Vec<Rational> {
    let [r1, f1, w1] = split_cone(act.forms(), n1, x);
    let [r2, f2, w2] = split_cone(act.module(), n2, y);
    let al = Scalar::real(alpha.clone());
    let one_al = Scalar::real(q(1, 1) - alpha);
    let r = act.left(n1, &r1, n2).apply(&r2);
    let f = act.left(n1, &f1, n2).apply(&f2);
    let mix2 = combine(&r2, &f2, &al, &one_al);
    let mix1 = combine(&r1, &f1, &one_al, &al);
    let a = act.left(n1 + 1, &w1, n2).apply(&mix2);
    let b = act.left(n1, &mix1, n2 + 1).apply(&w2);
    let w = combine(&a, &b, &Scalar::one(), &Scalar::sign(n1));
    let mut out = realify_vec(&r);
    out.extend(realify_vec(&f));
    out.extend(realify_vec(&w));
    out
}

/// `x • y = ψ(φ(x)·φ(y))` for `x` in the ambient of `D_{n1}(E,p1)` and `y`
/// in the ambient of `D_{n2}(M,p2)`; lands in the ambient of
/// `D_{n1+n2}(M,p1+p2)`. All indices stored.
#[allow(clippy::too_many_arguments)]
pub fn deligne_product_h<A: FormAction + ?Sized>(
    act: &A,
    p1: i64,
    n1: i64,
    x: &[Rational],
    p2: i64,
    n2: i64,
    y: &[Rational],
    alpha: &Rational,
) -> Vec<Rational> {
    let cx = phi_h(act.forms(), p1, n1).apply(x);
    let cy = phi_h(act.module(), p2, n2).apply(y);
    let c = cone_product_h(act, n1, &cx, n2, &cy, alpha);
    psi_h(act.module(), p1 + p2, n1 + n2).apply(&c)
}

/// Weight of the cone product used for every chain-level product.
pub fn product_alpha() -> Rational {
    q(0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{CMatrix, Field};

    fn point() -> BigradedComplex {
        BigradedComplex::new(
            "point",
            Variance::Cohomological,
            Some(0),
            BTreeMap::from([((0, 0), 1)]),
            BTreeMap::new(),
            BTreeMap::new(),
            BTreeMap::from([((0, 0), CMatrix::identity(1))]),
        )
        .unwrap()
    }

    #[test]
    fn point_model_h0() {
        let d = build_deligne(&point(), 0).unwrap();
        assert_eq!(d.homology_table().get(&0), Some(&1));
        assert_eq!(d.homology_table().values().sum::<usize>(), 1);
        let c = build_cone(&point(), 0).unwrap();
        assert_eq!(c.homology_table().get(&0), Some(&1));
        assert_eq!(c.homology_table().values().sum::<usize>(), 1);
    }

    #[test]
    fn empty_complex_gives_empty_answers() {
        let a = BigradedComplex::new("empty", Variance::Homological, None, BTreeMap::new(), BTreeMap::new(), BTreeMap::new(), BTreeMap::new())
            .unwrap();
        assert!(build_deligne(&a, 0).unwrap().homology_table().is_empty());
        assert!(build_cone(&a, 0).unwrap().homology_table().is_empty());
        assert!(homotopy_maps(&a, 0).is_ok());
    }

    #[test]
    fn degenerate_ranges_on_a_point() {
        // H_D(point, ℝ(p)): ℝ(p) in degree 0 for p ≤ 0, ℂ/ℝ(p) in degree 1 for p ≥ 1
        for p in -3..=3 {
            let c = degenerate_range_check(&point(), p).unwrap();
            let want = if p <= 0 { DegenerateRange::RealComplex } else { DegenerateRange::ShiftedRealComplex };
            assert_eq!(c.range, want);
            assert!(c.equal && c.same_spaces, "p = {p}");
            let deg = if p <= 0 { 0 } else { 1 };
            assert_eq!(c.deligne.iter().filter(|(_, &k)| k > 0).collect::<Vec<_>>(), vec![(&deg, &1)]);
        }
    }

    #[test]
    fn degenerate_ranges_on_the_suite() {
        for m in crate::models::suite() {
            let mut seen = [false; 2];
            for p in -3..=5 {
                let c = degenerate_range_check(&m.complex, p).unwrap();
                match c.range {
                    DegenerateRange::RealComplex => seen[0] = true,
                    DegenerateRange::ShiftedRealComplex => seen[1] = true,
                    DegenerateRange::Inside => continue,
                }
                assert!(c.equal && c.same_spaces, "{} p = {p}", m.complex.name);
            }
            assert!(seen[0] && seen[1], "{}", m.complex.name);
        }
    }

    #[test]
    fn homology_class_coordinates() {
        let c = ChainComplex {
            dims: BTreeMap::from([(0, 2), (1, 1)]),
            d: BTreeMap::from([(1, QMatrix::from_rows(vec![vec![q(1, 1)], vec![q(-1, 1)]], 1))]),
        };
        let h = c.homology(0);
        assert_eq!(h.dim, 1);
        let a = h.class_of(&[q(1, 1), q(0, 1)]).unwrap();
        let b = h.class_of(&[q(0, 1), q(1, 1)]).unwrap();
        assert_eq!(a, b);
        let _ = Scalar::one();
    }
}
