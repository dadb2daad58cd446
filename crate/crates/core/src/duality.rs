//! Currents as the linear dual of forms, the action of forms on currents,
//! fundamental currents, and the pairings between Deligne complexes of
//! forms and of currents.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::deligne::{build_deligne_h, deligne_product_h, product_alpha, DeligneError, EmbeddedComplex, FormAction};
use crate::dolbeault::{Bidegree, BigradedComplex, Variance};
use crate::exactnum::{complexify_vec, q, CMatrix, Field, QMatrix, Rational, Scalar};
use crate::models::FormAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualityError {
    #[error(transparent)]
    Deligne(#[from] DeligneError),
    #[error("the model has no wedge product")]
    NoWedgeDefined,
    #[error("the model has no fundamental current")]
    NoFundamentalCurrent,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("pairing of real twisted elements has an imaginary part")]
    ImaginaryPairing,
}

/// A closed current with its twist label `e`: `δ(η) = (2πi)^{-e} ∫ η`, the
/// factor stored only as the label.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleCurrent {
    pub degree: i64,
    pub twist: i64,
    pub coords: Vec<Scalar>,
}

/// A complex `A`, its dual `B` with `B_{x,y} = (A^{x,y})^*`, and the
/// distinguished currents.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingData {
    pub source: BigradedComplex,
    pub dual: BigradedComplex,
    pub delta_x: Option<CycleCurrent>,
    pub cycles: BTreeMap<String, CycleCurrent>,
}

fn neg(b: Bidegree) -> Bidegree {
    (-b.0, -b.1)
}

/// `B` with stored index `−(stored index of A)`, `∂_B = (−1)^n ∂_Aᵀ`,
/// `∂̄_B = (−1)^n ∂̄_Aᵀ` on currents of degree `n`, `σ_B = S̄ᵀ`.
pub fn dual_complex(a: &BigradedComplex) -> Result<(BigradedComplex, PairingData), DualityError> {
    crate::deligne::ensure_valid(a)?;
    let variance = match a.variance {
        Variance::Homological => Variance::Cohomological,
        Variance::Cohomological => Variance::Homological,
    };
    let sb = variance.sign();
    // user bidegrees of B equal user bidegrees of A
    let dims: BTreeMap<Bidegree, usize> = a.dims();
    let to_b_user = |stored: Bidegree| (sb * stored.0, sb * stored.1);
    let mut del = BTreeMap::new();
    let mut delbar = BTreeMap::new();
    let mut sigma = BTreeMap::new();
    for (&ua, _) in &dims {
        let sa = (a.variance.sign() * ua.0, a.variance.sign() * ua.1);
        let st = neg(sa); // stored index in B
        let n = st.0 + st.1;
        let sign = Scalar::sign(n);
        // ∂_B : B(st) → B(st.0 − 1, st.1), transpose of ∂_A : A(−st.0+1, −st.1) → A(−st)
        let src_a = (sa.0 + 1, sa.1);
        let del_a = block_h(a, "del", src_a, sa);
        del.insert(to_b_user(st), del_a.transpose().scale(&sign));
        let src_a = (sa.0, sa.1 + 1);
        let delbar_a = block_h(a, "delbar", src_a, sa);
        delbar.insert(to_b_user(st), delbar_a.transpose().scale(&sign));
        // σ_B : B(st) → B(st.1, st.0), from σ_A : A(−st.1, −st.0) → A(−st)
        let sig_a = block_h(a, "sigma", (sa.1, sa.0), sa);
        sigma.insert(to_b_user(st), sig_a.conj().transpose());
    }
    let b = BigradedComplex::new(
        format!("dual({})", a.name),
        variance,
        a.dimension,
        dims,
        del,
        delbar,
        sigma,
    )
    .map_err(DeligneError::from)?;
    let data = PairingData { source: a.clone(), dual: b.clone(), delta_x: None, cycles: BTreeMap::new() };
    Ok((b, data))
}

/// Block of `∂`, `∂̄` or `σ` from stored `src` to stored `dst` (zero if absent).
fn block_h(a: &BigradedComplex, which: &str, src: Bidegree, dst: Bidegree) -> CMatrix {
    let s = a.variance.sign();
    let user = (s * src.0, s * src.1);
    a.blocks(which)
        .remove(&user)
        .unwrap_or_else(|| CMatrix::zeros(a.dim_h(dst), a.dim_h(src)))
}

impl PairingData {
    /// Permutation taking coordinates of `B_n` to coordinates of `A_{−n}`
    /// so that `T(ω) = (P t)·ω`.
    pub fn transfer_h(&self, n: i64) -> CMatrix {
        let lb = self.dual.layout_h(n);
        let la = self.source.layout_h(-n);
        let mut m = CMatrix::zeros(la.total, lb.total);
        for &(b, ob, d) in &lb.blocks {
            let (oa, _) = la.offset(neg(b)).expect("dual block");
            for k in 0..d {
                m.set(oa + k, ob + k, Scalar::one());
            }
        }
        m
    }

    /// `T(ω)` for `T ∈ B_n` and `ω ∈ A_{−n}` (stored degrees).
    pub fn eval_h(&self, n: i64, t: &[Scalar], w: &[Scalar]) -> Scalar {
        let pt = self.transfer_h(n).apply(t);
        pt.iter().zip(w).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
    }

    /// Evaluation matrix in the chosen bases: `⟨e_i^*, e_j⟩`.
    pub fn evaluation_matrix_h(&self, n: i64) -> CMatrix {
        self.transfer_h(n)
    }

    /// Whether `⟨dT, φ⟩ = (−1)^n ⟨T, dφ⟩` holds on all basis pairs.
    pub fn adjointness_holds(&self) -> bool {
        let Some((lo, hi)) = self.dual.degree_range_h() else { return true };
        for n in lo..=hi + 1 {
            // T ∈ B_n, φ ∈ A_{−n+1}
            let db = self.dual.d_h(n);
            let da = self.source.d_h(-n + 1);
            let lhs = self.transfer_h(n - 1).mul(&db);
            let rhs = da.transpose().mul(&self.transfer_h(n)).scale(&Scalar::sign(n));
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

/// Forms of a [`FormAlgebra`] acting on the dual currents by
/// `(ω∧T)(η) = T(η∧ω)`.
pub struct CurrentAction<'a> {
    pub forms: &'a FormAlgebra,
    pub data: &'a PairingData,
}

impl FormAction for CurrentAction<'_> {
    fn forms(&self) -> &BigradedComplex {
        &self.forms.complex
    }
    fn module(&self) -> &BigradedComplex {
        &self.data.dual
    }
    fn left(&self, k: i64, x: &[Scalar], j: i64) -> CMatrix {
        // η ∈ A_{−(j+k)}, η∧ω ∈ A_{−j}
        let r = self.forms.right_mult_h(-(j + k), k, x);
        let pj = self.data.transfer_h(j);
        let pjk = self.data.transfer_h(j + k);
        pjk.transpose().mul(&r.transpose()).mul(&pj)
    }
}

/// `ω ∧ T` for `ω ∈ E` of stored degree `k` and `T ∈ B` of stored degree `j`.
pub fn wedge_action(forms: &FormAlgebra, data: &PairingData, k: i64, omega: &[Scalar], j: i64, t: &[Scalar]) -> Result<Vec<Scalar>, DualityError> {
    if forms.table.is_empty() {
        return Err(DualityError::NoWedgeDefined);
    }
    Ok(CurrentAction { forms, data }.left(k, omega, j).apply(t))
}

/// Dual complex of a form algebra with `δ_X(η) = i^{-d} ∫η` attached.
pub fn currents_of(forms: &FormAlgebra) -> Result<PairingData, DualityError> {
    let (_, mut data) = dual_complex(&forms.complex)?;
    if let (Some(d), false) = (forms.complex.dimension, forms.integral.is_empty()) {
        let top = -2 * d;
        let lay = forms.complex.layout_h(top);
        let mut w = vec![Scalar::zero(); lay.total];
        for (g, c) in &forms.integral {
            let (o, _) = lay.offset(g.0).expect("integral on the top degree");
            w[o + g.1] = &Scalar::i_pow(-d) * c;
        }
        let t = data.transfer_h(2 * d).transpose().apply(&w);
        data.delta_x = Some(CycleCurrent { degree: 2 * d, twist: d, coords: t });
    }
    Ok(data)
}

/// `[ω] = ω ∧ δ_X` for `ω` of stored degree `k`; lands in `B_{2d+k}`.
pub fn current_of_form(forms: &FormAlgebra, data: &PairingData, k: i64, omega: &[Scalar]) -> Result<Vec<Scalar>, DualityError> {
    let dx = data.delta_x.as_ref().ok_or(DualityError::NoFundamentalCurrent)?;
    wedge_action(forms, data, k, omega, dx.degree, &dx.coords)
}

/// Matrix of `ω ↦ [ω]` from `A_k` to `B_{2d+k}` (stored degrees).
pub fn current_of_form_matrix(forms: &FormAlgebra, data: &PairingData, k: i64) -> Result<CMatrix, DualityError> {
    let dx = data.delta_x.as_ref().ok_or(DualityError::NoFundamentalCurrent)?;
    let m = forms.complex.degree_dim_h(k);
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let mut e = vec![Scalar::zero(); m];
        e[j] = Scalar::one();
        cols.push(wedge_action(forms, data, k, &e, dx.degree, &dx.coords)?);
    }
    Ok(CMatrix::from_columns(data.dual.degree_dim_h(dx.degree + k), &cols))
}

/// Relabel `(n, p)` of the currents as the cohomological index
/// `(2d − n, d − p)`; the map is an involution.
pub fn regrade(d: i64, n: i64, p: i64) -> (i64, i64) {
    (2 * d - n, d - p)
}

/// Ambient stored degree of `D_n(A,p)`.
pub fn ambient_degree(n: i64, p: i64) -> i64 {
    if n <= 2 * p {
        n
    } else {
        n + 1
    }
}

/// Value of the Deligne pairing `T(ω)` for realified ambient vectors,
/// `ω ∈ D^n(E,p)` and `T ∈ D_{n−1}(B,p−1)`.
pub fn deligne_pairing(data: &PairingData, n: i64, p: i64, omega: &[Rational], t: &[Rational]) -> Result<Rational, DualityError> {
    let (nh, ph) = (-n, -p);
    let ea = ambient_degree(nh, ph);
    let ba = ambient_degree(n - 1, p - 1);
    if ea != -ba {
        return Err(DualityError::DegreeMismatch(format!("form ambient {ea} against current ambient {ba}")));
    }
    if omega.len() != 2 * data.source.degree_dim_h(ea) || t.len() != 2 * data.dual.degree_dim_h(ba) {
        return Err(DualityError::DegreeMismatch("vector length".into()));
    }
    let v = data.eval_h(ba, &complexify_vec(t), &complexify_vec(omega));
    if !v.is_real() {
        return Err(DualityError::ImaginaryPairing);
    }
    Ok(v.re)
}

/// Chain-level pairing matrix between bases of `D^n(E,p)` (rows) and
/// `D_{n−1}(B,p−1)` (columns).
pub fn pairing_matrix(data: &PairingData, n: i64, p: i64) -> Result<QMatrix, DualityError> {
    let de = build_deligne_h(&data.source, -p)?;
    let db = build_deligne_h(&data.dual, p - 1)?;
    pairing_matrix_with(data, n, p, &de, &db)
}

fn pairing_matrix_with(data: &PairingData, n: i64, p: i64, de: &EmbeddedComplex, db: &EmbeddedComplex) -> Result<QMatrix, DualityError> {
    let (se, sb) = (de.space(-n), db.space(n - 1));
    let mut g = QMatrix::zeros(se.dim(), sb.dim());
    for (i, w) in se.basis_vectors().iter().enumerate() {
        for (j, t) in sb.basis_vectors().iter().enumerate() {
            g.set(i, j, deligne_pairing(data, n, p, w, t)?);
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignCheck {
    pub regime: String,
    pub rule: String,
    pub checked: usize,
    pub nonzero: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignReport {
    pub regimes: Vec<SignCheck>,
}

impl SignReport {
    pub fn passed(&self) -> bool {
        self.regimes.iter().all(|r| r.violations == 0)
    }

    /// Every regime was exercised by a pair or triple with a nonzero value.
    pub fn all_hit(&self) -> bool {
        self.regimes.iter().all(|r| r.nonzero > 0)
    }
}

/// `T(d_D ω) = ε (d_D T)(ω)` with `ε = (−1)^{n+1}` for `n ≤ 2p−1` and
/// `(−1)^n` otherwise, for `ω ∈ D^n(E,p)`, `T ∈ D_n(B,p−1)`.
pub fn check_pairing_differential_signs(data: &PairingData, ns: &[i64], ps: &[i64]) -> Result<SignReport, DualityError> {
    let mut low = SignCheck { regime: "n <= 2p-1".into(), rule: "(-1)^(n+1)".into(), checked: 0, nonzero: 0, violations: 0 };
    let mut high = SignCheck { regime: "n >= 2p".into(), rule: "(-1)^n".into(), checked: 0, nonzero: 0, violations: 0 };
    for &p in ps {
        let de = build_deligne_h(&data.source, -p)?;
        let db = build_deligne_h(&data.dual, p - 1)?;
        for &n in ns {
            let eps = if n <= 2 * p - 1 { Scalar::sign(n + 1) } else { Scalar::sign(n) };
            let slot = if n <= 2 * p - 1 { &mut low } else { &mut high };
            let (se, sb) = (de.space(-n), db.space(n));
            if se.dim() == 0 || sb.dim() == 0 {
                continue;
            }
            let d_e = de.ambient_d.get(&(-n)).cloned();
            let d_b = db.ambient_d.get(&n).cloned();
            for w in se.basis_vectors() {
                let dw = d_e.as_ref().map(|m| m.apply(&w));
                for t in sb.basis_vectors() {
                    // T(d_D ω): d_D ω ∈ D^{n+1}(E,p) against T ∈ D_n(B,p−1)
                    let lhs = match &dw {
                        Some(dw) => deligne_pairing(data, n + 1, p, dw, &t)?,
                        None => q(0, 1),
                    };
                    let rhs = match &d_b {
                        Some(m) => deligne_pairing(data, n, p, &w, &m.apply(&t))?,
                        None => q(0, 1),
                    };
                    slot.checked += 1;
                    if lhs != q(0, 1) || rhs != q(0, 1) {
                        slot.nonzero += 1;
                    }
                    if lhs != &eps.re * &rhs {
                        slot.violations += 1;
                    }
                }
            }
        }
    }
    Ok(SignReport { regimes: vec![low, high] })
}

/// The four action regimes keyed on `(m > 2q, l ≥ 2r)`: name and sign.
pub fn action_sign(n: i64, m: i64, q_: i64, l: i64, r: i64) -> (&'static str, i64) {
    let (high_m, high_l) = (m > 2 * q_, l >= 2 * r);
    let sign = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    match (high_m, high_l) {
        (true, true) => (ACTION_REGIMES[0].0, sign(n)),
        (false, false) => (ACTION_REGIMES[1].0, 1),
        (true, false) => (ACTION_REGIMES[2].0, sign(m - 1)),
        (false, true) => (ACTION_REGIMES[3].0, sign(l)),
    }
}

const ACTION_REGIMES: [(&str, &str); 4] = [
    ("m > 2q, l >= 2r", "(-1)^n"),
    ("m <= 2q, l < 2r", "+1"),
    ("m > 2q, l < 2r", "(-1)^(m-1)"),
    ("m <= 2q, l >= 2r", "(-1)^l"),
];

/// `(ω•T)(η) = ± T(η•ω)` for `ω ∈ D^n(E,p)`, `T ∈ D_m(B,q)`,
/// `η ∈ D^l(E,r)` with `n − m + l = 1`, `p − q + r = 1`, over all basis
/// triples in the window.
pub fn check_pairing_action_signs(forms: &FormAlgebra, data: &PairingData, ns: &[i64], ps: &[i64], ls: &[i64], rs: &[i64]) -> Result<SignReport, DualityError> {
    if forms.table.is_empty() {
        return Err(DualityError::NoWedgeDefined);
    }
    let mut checks: Vec<SignCheck> = ACTION_REGIMES
        .iter()
        .map(|(r, rule)| SignCheck { regime: r.to_string(), rule: rule.to_string(), checked: 0, nonzero: 0, violations: 0 })
        .collect();
    let act = CurrentAction { forms, data };
    let alpha = product_alpha();
    let mut cache_e: BTreeMap<i64, EmbeddedComplex> = BTreeMap::new();
    let mut cache_b: BTreeMap<i64, EmbeddedComplex> = BTreeMap::new();
    for &p in ps.iter().chain(rs) {
        if !cache_e.contains_key(&p) {
            cache_e.insert(p, build_deligne_h(&data.source, -p)?);
        }
    }
    for &p in ps {
        for &r in rs {
            let q_ = p + r - 1;
            if !cache_b.contains_key(&q_) {
                cache_b.insert(q_, build_deligne_h(&data.dual, q_)?);
            }
        }
    }
    for &p in ps {
        for &r in rs {
            let q_ = p + r - 1;
            for &n in ns {
                for &l in ls {
                    let m = n + l - 1;
                    let (name, sign) = action_sign(n, m, q_, l, r);
                    let (de_p, de_r, db_q) = (&cache_e[&p], &cache_e[&r], &cache_b[&q_]);
                    let (sw, se, st) = (de_p.space(-n), de_r.space(-l), db_q.space(m));
                    if sw.dim() == 0 || se.dim() == 0 || st.dim() == 0 {
                        continue;
                    }
                    let slot = checks.iter_mut().find(|c| c.regime == name).expect("regime");
                    for w in sw.basis_vectors() {
                        for t in st.basis_vectors() {
                            let wt = deligne_product_h(&act, -p, -n, &w, q_, m, &t, &alpha);
                            for e in se.basis_vectors() {
                                let ew = deligne_product_h(forms, -r, -l, &e, -p, -n, &w, &alpha);
                                let lhs = deligne_pairing(data, l, r, &e, &wt)?;
                                let rhs = deligne_pairing(data, l + n, r + p, &ew, &t)?;
                                slot.checked += 1;
                                if lhs != q(0, 1) || rhs != q(0, 1) {
                                    slot.nonzero += 1;
                                }
                                if lhs != &q(sign, 1) * &rhs {
                                    slot.violations += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(SignReport { regimes: checks })
}

/// Sign `ε_k` with `d_B [ω] = ε_k [d_A ω]` for `ω` of stored degree `k`,
/// or `None` if no single sign works.
pub fn current_of_form_sign(forms: &FormAlgebra, data: &PairingData, k: i64) -> Result<Option<i64>, DualityError> {
    let d = forms.complex.dimension.ok_or(DualityError::NoFundamentalCurrent)?;
    let lhs = data.dual.d_h(2 * d + k).mul(&current_of_form_matrix(forms, data, k)?);
    let rhs = current_of_form_matrix(forms, data, k - 1)?.mul(&forms.complex.d_h(k));
    if lhs == rhs {
        Ok(Some(1))
    } else if lhs == rhs.scale(&Scalar::from_int(-1)) {
        Ok(Some(-1))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareEntry {
    pub n: i64,
    pub p: i64,
    pub target_n: i64,
    pub target_p: i64,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareReport {
    pub model: String,
    pub dimension: i64,
    pub entries: Vec<PoincareEntry>,
}

impl PoincareReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.iso)
    }
}

/// Map `H^n(D(E,p)) → H_{2d−n}(D(B,d−p))` induced by `ω ↦ [ω]`, for every
/// `(n,p)` of the window (cohomological indices on forms).
pub fn poincare_iso_check(forms: &FormAlgebra, data: &PairingData, ns: &[i64], ps: &[i64]) -> Result<PoincareReport, DualityError> {
    let d = forms.complex.dimension.ok_or(DualityError::NoFundamentalCurrent)?;
    let mut entries = Vec::new();
    for &p in ps {
        let de = build_deligne_h(&data.source, -p)?;
        let (tn_p, db) = (d - p, build_deligne_h(&data.dual, d - p)?);
        for &n in ns {
            let tn = 2 * d - n;
            let hs = de.chain.homology(-n);
            let ht = db.chain.homology(tn);
            let k = ambient_degree(-n, -p);
            let amb = current_of_form_matrix(forms, data, k)?.realify();
            let rank = match de.coords_of_map(-n, &amb, &db, tn) {
                Ok(m) => ht.classes_of(&m.mul(&hs.reps)).map(|c| c.rank()),
                Err(_) => None,
            };
            let (rank, ok) = match rank {
                Some(r) => (r, r == hs.dim && r == ht.dim),
                None => (0, false),
            };
            entries.push(PoincareEntry {
                n,
                p,
                target_n: tn,
                target_p: tn_p,
                source_dim: hs.dim,
                target_dim: ht.dim,
                rank,
                iso: ok,
            });
        }
    }
    Ok(PoincareReport { model: forms.complex.name.clone(), dimension: d, entries })
}

/// Induced pairing `H^n(D(E,p)) ⊗ H^{2d−n+1}(D(E,d−p+1)) → ℝ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GramReport {
    pub n: i64,
    pub p: i64,
    pub partner_n: i64,
    pub partner_p: i64,
    pub rows: usize,
    pub cols: usize,
    pub matrix: Vec<Vec<String>>,
    pub rank: usize,
    pub perfect: bool,
}

/// Gram matrix of `(x, y) ↦ [y](x)` between homology bases, the second
/// factor sent to currents by `[·]`.
pub fn exceptional_duality(forms: &FormAlgebra, data: &PairingData, n: i64, p: i64) -> Result<GramReport, DualityError> {
    let d = forms.complex.dimension.ok_or(DualityError::NoFundamentalCurrent)?;
    let (n2, p2) = (2 * d - n + 1, d - p + 1);
    let de = build_deligne_h(&data.source, -p)?;
    let de2 = build_deligne_h(&data.source, -p2)?;
    let db = build_deligne_h(&data.dual, p - 1)?;
    let hx = de.chain.homology(-n);
    let hy = de2.chain.homology(-n2);
    let amb = current_of_form_matrix(forms, data, ambient_degree(-n2, -p2))?.realify();
    let to_b = de2.coords_of_map(-n2, &amb, &db, n - 1)?;
    let (sx, sb) = (de.space(-n), db.space(n - 1));
    let xs: Vec<Vec<Rational>> = if hx.dim == 0 { vec![] } else { sx.basis().mul(&hx.reps).columns() };
    let ys: Vec<Vec<Rational>> = if hy.dim == 0 { vec![] } else { sb.basis().mul(&to_b.mul(&hy.reps)).columns() };
    let mut g = QMatrix::zeros(xs.len(), ys.len());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            g.set(i, j, deligne_pairing(data, n, p, x, y)?);
        }
    }
    let rank = g.rank();
    Ok(GramReport {
        n,
        p,
        partner_n: n2,
        partner_p: p2,
        rows: g.rows(),
        cols: g.cols(),
        matrix: (0..g.rows()).map(|i| (0..g.cols()).map(|j| g.get(i, j).to_string()).collect()).collect(),
        rank,
        perfect: g.rows() == g.cols() && rank == g.rows(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet_model, kahler_model};

    fn unit_vec(n: usize, k: usize) -> Vec<Scalar> {
        (0..n).map(|j| if j == k { Scalar::one() } else { Scalar::zero() }).collect()
    }

    #[test]
    fn point_dual_is_a_line() {
        let f = kahler_model("point").unwrap();
        let data = currents_of(&f).unwrap();
        assert_eq!(data.dual.degree_dim_h(0), 1);
        assert_eq!(data.evaluation_matrix_h(0), CMatrix::identity(1));
        // δ_X on a point is plain evaluation
        assert_eq!(data.delta_x.as_ref().unwrap().coords, vec![Scalar::one()]);
    }

    #[test]
    fn adjointness_and_double_dual() {
        for f in [kahler_model("P1").unwrap(), kahler_model("elliptic").unwrap(), jet_model(3).unwrap()] {
            let data = currents_of(&f).unwrap();
            assert!(data.adjointness_holds(), "{}", f.complex.name);
            let (bb, _) = dual_complex(&data.dual).unwrap();
            assert_eq!(bb.variance, f.complex.variance);
            // the sign of the adjoint enters twice, so x ↦ (−1)^n x identifies
            // the double dual with the original
            let (lo, hi) = f.complex.degree_range_h().unwrap();
            for n in lo..=hi + 1 {
                let flip = Scalar::from_int(-1);
                assert_eq!(bb.del_h(n), f.complex.del_h(n).scale(&flip));
                assert_eq!(bb.delbar_h(n), f.complex.delbar_h(n).scale(&flip));
                assert_eq!(bb.sigma_h(n), f.complex.sigma_h(n));
            }
        }
    }

    #[test]
    fn evaluation_is_perfect() {
        let f = jet_model(2).unwrap();
        let data = currents_of(&f).unwrap();
        for n in -3..=1 {
            let m = data.evaluation_matrix_h(n);
            assert_eq!(m.rows(), m.cols());
            assert!(m.is_invertible() || m.rows() == 0);
        }
    }

    #[test]
    fn unit_acts_trivially() {
        let f = jet_model(2).unwrap();
        let data = currents_of(&f).unwrap();
        let one = f.unit();
        for j in 0..=2 {
            let dim = data.dual.degree_dim_h(j);
            for k in 0..dim {
                let t = unit_vec(dim, k);
                let once = wedge_action(&f, &data, 0, &one, j, &t).unwrap();
                assert_eq!(once, t);
                assert_eq!(wedge_action(&f, &data, 0, &one, j, &once).unwrap(), once);
            }
        }
    }

    #[test]
    fn kahler_class_on_fundamental_current() {
        // (ω ∧ δ_X)(1) = δ_X(ω) = i^{-1} ∫ω = −i on P¹
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        let t = current_of_form(&f, &data, -2, &[Scalar::one()]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(data.eval_h(0, &t, &f.unit()), -Scalar::i());
        assert_eq!(current_of_form(&f, &data, 0, &f.unit()).unwrap(), data.delta_x.clone().unwrap().coords);
        assert_eq!(current_of_form(&f, &data, -2, &[Scalar::zero()]).unwrap(), vec![Scalar::zero()]);
    }

    #[test]
    fn current_of_form_is_a_chain_map() {
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        for k in -3..=1 {
            assert!(current_of_form_sign(&f, &data, k).unwrap().is_some());
        }
        let j = jet_model(2).unwrap();
        let jd = currents_of(&j).unwrap();
        assert!(jd.delta_x.is_none());
        assert_eq!(current_of_form(&j, &jd, 0, &j.unit()), Err(DualityError::NoFundamentalCurrent));
    }

    #[test]
    fn regrade_relabels() {
        assert_eq!(regrade(1, 0, 0), (2, 1));
        assert_eq!(regrade(2, 2, 5), (2, -3));
        assert_eq!(regrade(3, regrade(3, 4, 1).0, regrade(3, 4, 1).1), (4, 1));
    }

    #[test]
    fn pairing_matrices_are_perfect() {
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        let g = pairing_matrix(&data, 2, 1).unwrap();
        assert_eq!((g.rows(), g.cols()), (1, 1));
        assert!(g.is_invertible());
        let j = jet_model(2).unwrap();
        let jd = currents_of(&j).unwrap();
        for p in -1..=2 {
            for n in -1..=4 {
                let g = pairing_matrix(&jd, n, p).unwrap();
                assert_eq!(g.rows(), g.cols(), "n={n} p={p}");
                assert!(g.rows() == 0 || g.is_invertible(), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn pairing_rejects_mismatched_lengths() {
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        assert!(matches!(deligne_pairing(&data, 2, 1, &[], &[]), Err(DualityError::DegreeMismatch(_))));
    }

    #[test]
    fn differential_signs_on_jets() {
        let j = jet_model(2).unwrap();
        let data = currents_of(&j).unwrap();
        let w: Vec<i64> = (-1..=3).collect();
        let r = check_pairing_differential_signs(&data, &w, &w).unwrap();
        assert!(r.passed() && r.all_hit(), "{r:?}");
    }

    #[test]
    fn poincare_on_p1() {
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        let r = poincare_iso_check(&f, &data, &[2], &[1]).unwrap();
        assert_eq!(r.entries[0].rank, 1);
        assert!(r.passed());
        let r = poincare_iso_check(&f, &data, &[5], &[1]).unwrap();
        assert_eq!((r.entries[0].source_dim, r.entries[0].target_dim), (0, 0));
        assert!(r.passed());
    }

    #[test]
    fn exceptional_duality_p1() {
        let f = kahler_model("P1").unwrap();
        let data = currents_of(&f).unwrap();
        let g = exceptional_duality(&f, &data, 1, 1).unwrap();
        assert_eq!((g.partner_n, g.partner_p), (2, 1));
        assert_eq!((g.rows, g.cols), (1, 1));
        assert!(g.perfect);
        let g = exceptional_duality(&f, &data, 7, 1).unwrap();
        assert_eq!((g.rows, g.cols), (0, 0));
        assert!(g.perfect);
    }
    #[test]
    fn action_regime_rejects_off_constraint() {
        assert!(action_regime(1, 1, 0, 1, 0, 1).is_ok());
        assert!(matches!(action_regime(1, 1, 1, 1, 0, 1), Err(DualityError::Deligne(DeligneError::UnsupportedRegime(_)))));
    }

    #[test]
    fn displayed_product_formula_on_jets() {
        let j = jet_model(2).unwrap();
        let data = currents_of(&j).unwrap();
        let w: Vec<i64> = (-1..=3).collect();
        let c = check_r_formula(&j, &data, &w, &w, &w).unwrap();
        assert!(c.violations == 0 && c.nonzero > 0, "{c:?}");
    }

    #[test]
    fn product_reduces_to_wedges() {
        // n ≥ 2p, m ≥ 2q: x•y = x∧y.  n < 2p, m < 2q with dx = 0: x•y = x∧r_q(y).
        let j = jet_model(2).unwrap();
        let a = &j.complex;
        let (p, q_) = (1, 1);
        let de_p = build_deligne_h(a, -p).unwrap();
        let de_q = build_deligne_h(a, -q_).unwrap();
        let mut hits = 0;
        for (n, m) in [(2, 2), (0, 0), (1, 0), (0, 1), (1, 1)] {
            let (kx, ky) = (ambient_degree(-n, -p), ambient_degree(-m, -q_));
            let d_x = a.d_h(kx).realify();
            let r_q = if m < 2 * q_ {
                a.pi_real_h(-m, -q_).mul(&a.f_h(-m, -q_).realify()).mul(&a.d_h(ky).realify()).scale(&q(2, 1))
            } else {
                QMatrix::zeros(0, 0)
            };
            for x in de_p.space(-n).basis_vectors() {
                if n < 2 * p && !d_x.apply(&x).iter().all(|v| *v == q(0, 1)) {
                    continue;
                }
                for y in de_q.space(-m).basis_vectors() {
                    let got = deligne_product(&j, n, p, &x, m, q_, &y).unwrap();
                    let (yy, ly) = if n < 2 * p { (r_q.apply(&y), -m) } else { (y.clone(), ky) };
                    let wedge = j.wedge_h(kx, &complexify_vec(&x), ly, &complexify_vec(&yy));
                    assert_eq!(got, crate::exactnum::realify_vec(&wedge), "n={n} m={m}");
                    hits += 1;
                }
            }
            let zero = vec![q(0, 1); 2 * a.degree_dim_h(kx)];
            let y = vec![q(1, 1); 2 * a.degree_dim_h(ky)];
            assert!(deligne_product(&j, n, p, &zero, m, q_, &y).unwrap().iter().all(|v| *v == q(0, 1)));
        }
        assert!(hits > 0);
    }

}

/// Regime and sign of `(ω•T)(η) = ± T(η•ω)`; inputs off the constraints
/// `n − m + l = 1`, `p − q + r = 1` are rejected.
pub fn action_regime(n: i64, p: i64, m: i64, q_: i64, l: i64, r: i64) -> Result<(&'static str, i64), DualityError> {
    if n - m + l != 1 || p - q_ + r != 1 {
        return Err(DeligneError::UnsupportedRegime(format!("n={n} p={p} m={m} q={q_} l={l} r={r}")).into());
    }
    Ok(action_sign(n, m, q_, l, r))
}

/// `ω • η` for `ω ∈ D^n(E,p)`, `η ∈ D^m(E,q)`, as realified ambient vectors.
pub fn deligne_product(forms: &FormAlgebra, n: i64, p: i64, x: &[Rational], m: i64, q_: i64, y: &[Rational]) -> Result<Vec<Rational>, DualityError> {
    if forms.table.is_empty() {
        return Err(DualityError::NoWedgeDefined);
    }
    check_len(&forms.complex, ambient_degree(-n, -p), x)?;
    check_len(&forms.complex, ambient_degree(-m, -q_), y)?;
    Ok(deligne_product_h(forms, -p, -n, x, -q_, -m, y, &product_alpha()))
}

/// `ω • T` for `ω ∈ D^n(E,p)` and `T ∈ D_m(B,q)`; lands in `D_{m−n}(B,q−p)`.
pub fn form_current_product(forms: &FormAlgebra, data: &PairingData, n: i64, p: i64, x: &[Rational], m: i64, q_: i64, t: &[Rational]) -> Result<Vec<Rational>, DualityError> {
    if forms.table.is_empty() {
        return Err(DualityError::NoWedgeDefined);
    }
    check_len(&forms.complex, ambient_degree(-n, -p), x)?;
    check_len(&data.dual, ambient_degree(m, q_), t)?;
    let act = CurrentAction { forms, data };
    Ok(deligne_product_h(&act, -p, -n, x, q_, m, t, &product_alpha()))
}

fn check_len(a: &BigradedComplex, k: i64, v: &[Rational]) -> Result<(), DualityError> {
    if v.len() == 2 * a.degree_dim_h(k) {
        Ok(())
    } else {
        Err(DualityError::DegreeMismatch(format!("expected a vector of length {} in degree {k}", 2 * a.degree_dim_h(k))))
    }
}

/// Checks `(ω•T)(η) = ((−1)^n r_p(ω)∧T + ω∧r_q(T))(η)` with
/// `r_p(ω) = 2π_p(F^p dω)`, `r_q(T) = 2π_q(F_q dT)`, on basis triples with
/// `n < 2p`, `m > 2q`, `l ≥ 2r`.
pub fn check_r_formula(forms: &FormAlgebra, data: &PairingData, ns: &[i64], ps: &[i64], rs: &[i64]) -> Result<SignCheck, DualityError> {
    let mut out = SignCheck { regime: "n < 2p, m > 2q, l >= 2r".into(), rule: "(-1)^n r_p(w)^T + w^r_q(T)".into(), checked: 0, nonzero: 0, violations: 0 };
    let act = CurrentAction { forms, data };
    let (e, b) = (&data.source, &data.dual);
    let alpha = product_alpha();
    for &p in ps {
        let de = build_deligne_h(e, -p)?;
        for &r in rs {
            let q_ = p + r - 1;
            let dr = build_deligne_h(e, -r)?;
            let db = build_deligne_h(b, q_)?;
            for &n in ns {
                if n >= 2 * p {
                    continue;
                }
                for l in 2 * r..=2 * r + 2 * forms.complex.dimension.unwrap_or(2) + 2 {
                    let m = n + l - 1;
                    if m <= 2 * q_ {
                        continue;
                    }
                    let (sw, st, se) = (de.space(-n), db.space(m), dr.space(-l));
                    if sw.dim() == 0 || st.dim() == 0 || se.dim() == 0 {
                        continue;
                    }
                    // ambient: ω ∈ E_{-n+1}, T ∈ B_{m+1}, η ∈ E_{-l}
                    let kw = -n + 1;
                    let rp = e.pi_real_h(-n, -p).mul(&e.f_h(-n, -p).realify()).mul(&e.d_h(kw).realify()).scale(&q(2, 1));
                    let rq = b.pi_real_h(m, q_).mul(&b.f_h(m, q_).realify()).mul(&b.d_h(m + 1).realify()).scale(&q(2, 1));
                    let sign = q(if n.rem_euclid(2) == 0 { 1 } else { -1 }, 1);
                    for w in sw.basis_vectors() {
                        let cw = complexify_vec(&w);
                        let rw = complexify_vec(&rp.apply(&w));
                        let left_w = act.left(kw, &cw, m).realify();
                        let left_rw = act.left(-n, &rw, m + 1).realify();
                        for t in st.basis_vectors() {
                            let prod = deligne_product_h(&act, -p, -n, &w, q_, m, &t, &alpha);
                            let a = left_rw.apply(&t);
                            let c = left_w.apply(&rq.apply(&t));
                            let display: Vec<Rational> = a.iter().zip(&c).map(|(x, y)| &(&sign * x) + y).collect();
                            for eta in se.basis_vectors() {
                                let lhs = deligne_pairing(data, l, r, &eta, &prod)?;
                                let rhs = deligne_pairing(data, l, r, &eta, &display)?;
                                out.checked += 1;
                                if lhs != q(0, 1) || rhs != q(0, 1) {
                                    out.nonzero += 1;
                                }
                                if lhs != rhs {
                                    out.violations += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
