//! Truncated classes, Green objects and the star product over finite complexes
//! of currents. The complement of a support is modelled as the quotient of the
//! currents by a subcomplex of currents supported on it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::deligne::{build_deligne_h, ChainComplex, DeligneError, EmbeddedComplex, Homology};
use crate::dolbeault::{Bidegree, BigradedComplex, ComplexError};
use crate::duality::{ambient_degree, current_of_form, currents_of, CurrentAction, DualityError, PairingData};
use crate::deligne::FormAction;
use crate::exactnum::{complexify_vec, q, realify_vec, CMatrix, Field, QMatrix, QSubspace, Rational, Scalar};
use crate::models::{degree_map_h, p1_with_function, FormAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GreenError {
    #[error(transparent)]
    Deligne(#[from] DeligneError),
    #[error(transparent)]
    Duality(#[from] DualityError),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("not a truncated class: {0}")]
    InvalidClass(String),
    #[error("support is not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("the model has no wedge product")]
    NoWedgeDefined,
}

impl From<ComplexError> for GreenError {
    fn from(e: ComplexError) -> Self {
        GreenError::Deligne(e.into())
    }
}

/// `B/S` for a subcomplex `S` given by spanning columns per stored bidegree,
/// with the projection and a section, both keyed by stored bidegree.
#[derive(Clone, Debug, PartialEq)]
pub struct Quotient {
    pub complex: BigradedComplex,
    pub projection: BTreeMap<Bidegree, CMatrix>,
    pub section: BTreeMap<Bidegree, CMatrix>,
}

impl Quotient {
    pub fn project_h(&self, src: &BigradedComplex, n: i64) -> CMatrix {
        degree_map_h(src, &self.complex, &self.projection, n)
    }

    pub fn lift_h(&self, src: &BigradedComplex, n: i64) -> CMatrix {
        degree_map_h(&self.complex, src, &self.section, n)
    }
}

fn block(b: &BigradedComplex, which: &str, src: Bidegree, dst: Bidegree) -> CMatrix {
    let s = b.variance.sign();
    b.blocks(which).remove(&(s * src.0, s * src.1)).unwrap_or_else(|| CMatrix::zeros(b.dim_h(dst), b.dim_h(src)))
}

/// Quotient of `b` by the span of `sub` (stored bidegrees). Fails unless the
/// span is stable under `∂`, `∂̄` and `σ`.
pub fn quotient_complex(b: &BigradedComplex, sub: &BTreeMap<Bidegree, CMatrix>, name: &str) -> Result<Quotient, GreenError> {
    let stored: Vec<Bidegree> = b.dims().keys().map(|&(x, y)| (b.variance.sign() * x, b.variance.sign() * y)).collect();
    let mut projection = BTreeMap::new();
    let mut section = BTreeMap::new();
    for &st in &stored {
        let m = b.dim_h(st);
        let w = sub.get(&st).cloned().unwrap_or_else(|| CMatrix::zeros(m, 0));
        if w.rows() != m {
            return Err(GreenError::NotASubcomplex(format!("generators at {st:?} have {} rows, expected {m}", w.rows())));
        }
        let pi = w.transpose().kernel().transpose();
        let sec = pi.solve(&CMatrix::identity(pi.rows())).expect("projection has full row rank");
        projection.insert(st, pi);
        section.insert(st, sec);
    }
    let s = b.variance.sign();
    let proj = |st: Bidegree| projection.get(&st).cloned().unwrap_or_else(|| CMatrix::zeros(0, b.dim_h(st)));
    let sect = |st: Bidegree| section.get(&st).cloned().unwrap_or_else(|| CMatrix::zeros(b.dim_h(st), 0));
    let span = |st: Bidegree| sub.get(&st).cloned().unwrap_or_else(|| CMatrix::zeros(b.dim_h(st), 0));
    let mut dims = BTreeMap::new();
    let mut maps: [BTreeMap<Bidegree, CMatrix>; 3] = Default::default();
    for &st in &stored {
        dims.insert((s * st.0, s * st.1), proj(st).rows());
        let targets = [("del", (st.0 - 1, st.1)), ("delbar", (st.0, st.1 - 1)), ("sigma", (st.1, st.0))];
        for (k, (which, t)) in targets.into_iter().enumerate() {
            if b.dim_h(t) == 0 {
                continue;
            }
            let op = block(b, which, st, t);
            // σ is antilinear: σ(x) = S x̄, so the span must be conjugated first
            let w = if which == "sigma" { span(st).conj() } else { span(st) };
            if !proj(t).mul(&op).mul(&w).is_zero() {
                return Err(GreenError::NotASubcomplex(format!("{which} leaves the span at {st:?}")));
            }
            let sec = if which == "sigma" { sect(st).conj() } else { sect(st) };
            maps[k].insert((s * st.0, s * st.1), proj(t).mul(&op).mul(&sec));
        }
    }
    let [del, delbar, sigma] = maps;
    let complex = BigradedComplex::new(name, b.variance, b.dimension, dims, del, delbar, sigma)?;
    Ok(Quotient { complex, projection, section })
}

/// A chain map between Deligne complexes in basis coordinates.
fn induced(src: &BigradedComplex, dst: &BigradedComplex, ambient: impl Fn(i64) -> CMatrix, ds: &EmbeddedComplex, dd: &EmbeddedComplex, p: i64) -> Result<BTreeMap<i64, QMatrix>, GreenError> {
    let mut out = BTreeMap::new();
    let Some((lo, hi)) = src.degree_range_h().or(dst.degree_range_h()) else { return Ok(out) };
    for n in lo - 1..=hi {
        let amb = ambient(ambient_degree(n, p)).realify();
        out.insert(n, ds.coords_of_map(n, &amb, dd, n)?);
    }
    Ok(out)
}

/// Ambient Deligne complex of `X`, a complement complex, and the restriction
/// chain map between them, all in basis coordinates at one stored weight.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagramContext {
    pub name: String,
    pub p: i64,
    pub ambient: EmbeddedComplex,
    pub complement: ChainComplex,
    pub restriction: BTreeMap<i64, QMatrix>,
    pub support_labels: Vec<String>,
}

impl DiagramContext {
    fn rho(&self, n: i64) -> QMatrix {
        self.restriction
            .get(&n)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.complement.dim(n), self.ambient.chain.dim(n)))
    }

    /// Degrees `n` where the restriction fails to commute with differentials.
    pub fn chain_map_failures(&self) -> Vec<i64> {
        let (lo, hi) = self.window();
        (lo..=hi + 1)
            .filter(|&n| self.complement.diff(n).mul(&self.rho(n)) != self.rho(n - 1).mul(&self.ambient.chain.diff(n)))
            .collect()
    }

    fn window(&self) -> (i64, i64) {
        let a = self.ambient.chain.range();
        let b = self.complement.range();
        let lo = a.map(|r| r.0).into_iter().chain(b.map(|r| r.0 - 1)).min().unwrap_or(0);
        let hi = a.map(|r| r.1).into_iter().chain(b.map(|r| r.1)).max().unwrap_or(0);
        (lo, hi)
    }

    /// Cone of the restriction: `s_n = D_n(X) ⊕ C_{n+1}`,
    /// `d(x, u) = (dx, ρx − du)`.
    pub fn support_complex(&self) -> ChainComplex {
        let (lo, hi) = self.window();
        let mut dims = BTreeMap::new();
        let mut d = BTreeMap::new();
        for n in lo - 1..=hi + 1 {
            dims.insert(n, self.ambient.chain.dim(n) + self.complement.dim(n + 1));
        }
        for n in lo..=hi + 1 {
            let (ax, ax1) = (self.ambient.chain.dim(n), self.ambient.chain.dim(n - 1));
            let (cu, cu1) = (self.complement.dim(n + 1), self.complement.dim(n));
            let top = self.ambient.chain.diff(n).hstack(&QMatrix::zeros(ax1, cu));
            let bottom = self.rho(n).hstack(&self.complement.diff(n + 1).scale(&q(-1, 1)));
            debug_assert_eq!(top.cols(), ax + cu);
            debug_assert_eq!(bottom.rows(), cu1);
            d.insert(n, top.vstack(&bottom));
        }
        ChainComplex { dims, d }
    }

    fn check_len(&self, what: &str, v: &[Rational], want: usize) -> Result<(), GreenError> {
        if v.len() != want {
            return Err(GreenError::DegreeMismatch(format!("{what} has {} coordinates, expected {want}", v.len())));
        }
        Ok(())
    }

    /// `H_{2p}` of the support complex.
    pub fn support_homology(&self) -> Homology {
        self.support_complex().homology(2 * self.p)
    }
}

/// `(ω, g̃)` with `ω` closed in `D_{2p}(X)` and `g̃ ∈ C_{2p+1}` modulo
/// boundaries, subject to `d g̃ = ρ(ω)`. Coordinates are in the bases of the
/// context.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedClass {
    pub p: i64,
    pub omega: Vec<Rational>,
    pub g: Vec<Rational>,
    /// Boundaries `d C_{2p+2}` that `g` is taken modulo.
    pub g_image: QSubspace,
}

impl TruncatedClass {
    pub fn new(ctx: &DiagramContext, omega: Vec<Rational>, g: Vec<Rational>) -> Result<Self, GreenError> {
        let p = ctx.p;
        ctx.check_len("ω", &omega, ctx.ambient.chain.dim(2 * p))?;
        ctx.check_len("g̃", &g, ctx.complement.dim(2 * p + 1))?;
        if ctx.ambient.chain.diff(2 * p).apply(&omega).iter().any(|x| !x.is_zero()) {
            return Err(GreenError::InvalidClass("ω is not closed".into()));
        }
        if ctx.complement.diff(2 * p + 1).apply(&g) != ctx.rho(2 * p).apply(&omega) {
            return Err(GreenError::InvalidClass("d g̃ differs from the restriction of ω".into()));
        }
        let g_image = QSubspace::span_of(&ctx.complement.diff(2 * p + 2));
        Ok(TruncatedClass { p, omega, g, g_image })
    }

    pub fn zero(ctx: &DiagramContext) -> Self {
        let z = |k: usize| vec![q(0, 1); k];
        Self::new(ctx, z(ctx.ambient.chain.dim(2 * ctx.p)), z(ctx.complement.dim(2 * ctx.p + 1))).expect("zero is a class")
    }

    pub fn add(&self, o: &Self) -> Self {
        let sum = |a: &[Rational], b: &[Rational]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        TruncatedClass { p: self.p, omega: sum(&self.omega, &o.omega), g: sum(&self.g, &o.g), g_image: self.g_image.clone() }
    }

    fn cone_vector(&self) -> Vec<Rational> {
        self.omega.iter().chain(&self.g).cloned().collect()
    }
}

/// A truncated class together with the cycle current it should represent.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenObject {
    pub class: TruncatedClass,
    pub delta: Vec<Rational>,
    pub twist: i64,
}

/// Class of a truncated class in the support homology, in the basis of
/// [`DiagramContext::support_homology`].
pub fn class_map(ctx: &DiagramContext, tc: &TruncatedClass) -> Vec<Rational> {
    ctx.support_homology().class_of(&tc.cone_vector()).expect("truncated classes are cycles of the cone")
}

/// `cl(y)`: the class of `(δ_y, 0)`. Requires `δ_y` closed and supported,
/// that is `ρ(δ_y) = 0`.
pub fn cycle_class(ctx: &DiagramContext, delta: &[Rational]) -> Result<Vec<Rational>, GreenError> {
    check_cycle(ctx, delta)?;
    let mut v = delta.to_vec();
    v.extend(vec![q(0, 1); ctx.complement.dim(2 * ctx.p + 1)]);
    Ok(ctx.support_homology().class_of(&v).expect("checked cycle"))
}

fn check_cycle(ctx: &DiagramContext, delta: &[Rational]) -> Result<(), GreenError> {
    let p = ctx.p;
    ctx.check_len("δ_y", delta, ctx.ambient.chain.dim(2 * p))?;
    if ctx.ambient.chain.diff(2 * p).apply(delta).iter().any(|x| !x.is_zero()) {
        return Err(GreenError::InvalidClass("δ_y is not closed".into()));
    }
    if ctx.rho(2 * p).apply(delta).iter().any(|x| !x.is_zero()) {
        return Err(GreenError::InvalidClass("δ_y does not vanish on the complement".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum GreenVerdict {
    /// `d_D γ̃ + δ_y = ω` and `g̃ = ρ(γ̃) − d u`.
    Green { witness: Vec<String>, correction: Vec<String> },
    /// Nonzero class of `(ω − δ_y, g̃)` in the support homology.
    NotGreen { obstruction: Vec<String> },
}

impl GreenVerdict {
    pub fn is_green(&self) -> bool {
        matches!(self, GreenVerdict::Green { .. })
    }
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Solve `d(γ̃, u) = (ω − δ_y, g̃)` in the support complex.
pub fn is_green_for(ctx: &DiagramContext, tc: &TruncatedClass, delta: &[Rational]) -> Result<GreenVerdict, GreenError> {
    check_cycle(ctx, delta)?;
    if tc.p != ctx.p {
        return Err(GreenError::DegreeMismatch(format!("class of weight {} in a context of weight {}", tc.p, ctx.p)));
    }
    let mut target: Vec<Rational> = tc.omega.iter().zip(delta).map(|(a, b)| a - b).collect();
    target.extend(tc.g.iter().cloned());
    let s = ctx.support_complex();
    let d = s.diff(2 * ctx.p + 1);
    match d.solve(&QMatrix::from_columns(target.len(), &[target.clone()])) {
        Some(x) => {
            let x = x.column(0);
            let k = ctx.ambient.chain.dim(2 * ctx.p + 1);
            Ok(GreenVerdict::Green { witness: strings(&x[..k]), correction: strings(&x[k..]) })
        }
        None => {
            let h = s.homology(2 * ctx.p);
            let c = h.class_of(&target).expect("cycle of the cone");
            Ok(GreenVerdict::NotGreen { obstruction: strings(&c) })
        }
    }
}

/// `a(η̃) = (d_D η, ρ(η))` for `η ∈ D_{2p+1}(X)`.
pub fn a_map(ctx: &DiagramContext, eta: &[Rational]) -> Result<TruncatedClass, GreenError> {
    let p = ctx.p;
    ctx.check_len("η", eta, ctx.ambient.chain.dim(2 * p + 1))?;
    TruncatedClass::new(ctx, ctx.ambient.chain.diff(2 * p + 1).apply(eta), ctx.rho(2 * p + 1).apply(eta))
}

pub fn omega_map(tc: &TruncatedClass) -> Vec<Rational> {
    tc.omega.clone()
}

/// `h(α) = [α]` in `H_{2p}(D(X))`.
pub fn h_map(ctx: &DiagramContext, alpha: &[Rational]) -> Result<Vec<Rational>, GreenError> {
    ctx.check_len("α", alpha, ctx.ambient.chain.dim(2 * ctx.p))?;
    ctx.ambient
        .chain
        .homology(2 * ctx.p)
        .class_of(alpha)
        .ok_or_else(|| GreenError::InvalidClass("α is not closed".into()))
}

/// Image of a support class in `H_{2p}(D(X))` under `(x, u) ↦ x`.
pub fn forget_supports(ctx: &DiagramContext, class: &[Rational]) -> Vec<Rational> {
    let h = ctx.support_homology();
    let v = h.reps.apply(class);
    let k = ctx.ambient.chain.dim(2 * ctx.p);
    ctx.ambient.chain.homology(2 * ctx.p).class_of(&v[..k]).expect("first slot is closed")
}

/// The currents of a form algebra with a supported subcomplex, restricted
/// to the complement, at stored weight `p`.
pub fn restriction_context(b: &BigradedComplex, support: &BTreeMap<Bidegree, CMatrix>, p: i64, label: &str) -> Result<(DiagramContext, Quotient), GreenError> {
    let quo = quotient_complex(b, support, &format!("{}|complement", b.name))?;
    let dx = build_deligne_h(b, p)?;
    let du = build_deligne_h(&quo.complex, p)?;
    let restriction = induced(b, &quo.complex, |n| quo.project_h(b, n), &dx, &du, p)?;
    let ctx = DiagramContext {
        name: format!("{} minus {label}", b.name),
        p,
        ambient: dx,
        complement: du.chain,
        restriction,
        support_labels: vec![label.to_string()],
    };
    Ok((ctx, quo))
}

/// Coordinates of an ambient (realified) vector in `D_n`.
fn coords_in(c: &EmbeddedComplex, n: i64, v: &[Rational]) -> Result<Vec<Rational>, GreenError> {
    c.space(n).coordinates(v).ok_or_else(|| GreenError::InvalidClass(format!("vector outside D_{n}")))
}

fn ambient_of(c: &EmbeddedComplex, n: i64, coords: &[Rational]) -> Vec<Rational> {
    c.space(n).basis().apply(coords)
}

/// The `P¹` context: currents on [`p1_with_function`], supported on the
/// evaluation `δ₀ = 1*` at the point where `u` vanishes, weight 0.
#[derive(Clone, Debug)]
pub struct P1Context {
    pub forms: FormAlgebra,
    pub data: PairingData,
    pub ctx: DiagramContext,
    pub quotient: Quotient,
    /// `δ₀` in `D_0(X, 0)`.
    pub delta: Vec<Rational>,
    /// `[i v]`, the harmonic representative of the point class.
    pub harmonic: Vec<Rational>,
    /// `G ∈ D_1(X, 0)` with `d_D G = u*`.
    pub green: Vec<Rational>,
}

impl P1Context {
    /// `(s·[iv] + d_D G, ρ(G))`; a truncated class for every `s`.
    pub fn scaled_class(&self, s: &Rational) -> TruncatedClass {
        let dg = self.ctx.ambient.chain.diff(1).apply(&self.green);
        let omega = self.harmonic.iter().zip(&dg).map(|(h, d)| &(h * s) + d).collect();
        let g = self.ctx.rho(1).apply(&self.green);
        TruncatedClass::new(&self.ctx, omega, g).expect("valid for every scale")
    }
}

pub fn p1_green_context() -> Result<P1Context, GreenError> {
    let forms = p1_with_function();
    let data = currents_of(&forms)?;
    let b = &data.dual;
    // 1* is the first generator at (0, 0)
    let mut e = CMatrix::zeros(b.dim_h((0, 0)), 1);
    e.set(0, 0, Scalar::one());
    let support = BTreeMap::from([((0, 0), e)]);
    let (ctx, quotient) = restriction_context(b, &support, 0, "point")?;
    let delta_amb = realify_vec(&[Scalar::one(), Scalar::zero()]);
    let delta = coords_in(&ctx.ambient, 0, &delta_amb)?;
    let iv = {
        let mut w = vec![Scalar::zero(); forms.complex.degree_dim_h(-2)];
        w[0] = Scalar::i();
        w
    };
    let harmonic = coords_in(&ctx.ambient, 0, &realify_vec(&current_of_form(&forms, &data, -2, &iv)?))?;
    let u_star = coords_in(&ctx.ambient, 0, &realify_vec(&[Scalar::zero(), Scalar::one()]))?;
    let d1 = ctx.ambient.chain.diff(1);
    let green = d1
        .solve(&QMatrix::from_columns(u_star.len(), &[u_star]))
        .ok_or_else(|| GreenError::InvalidClass("u* is not a boundary".into()))?
        .column(0);
    Ok(P1Context { forms, data, ctx, quotient, delta, harmonic, green })
}

/// A chain algebra map `f*: source → target` of form algebras, keyed by
/// stored bidegree.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub source: FormAlgebra,
    pub maps: BTreeMap<Bidegree, CMatrix>,
}

impl Pullback {
    pub fn identity(a: &FormAlgebra) -> Self {
        let maps = a
            .complex
            .dims()
            .keys()
            .map(|&(x, y)| {
                let s = a.variance().sign();
                let st = (s * x, s * y);
                (st, CMatrix::identity(a.complex.dim_h(st)))
            })
            .collect();
        Pullback { source: a.clone(), maps }
    }

    pub fn matrix_h(&self, target: &FormAlgebra, n: i64) -> CMatrix {
        degree_map_h(&self.source.complex, &target.complex, &self.maps, n)
    }

    /// Checks `f d = d f`, `f σ = σ f` and `f(x∧y) = f x ∧ f y` on generators.
    pub fn is_valid_for(&self, target: &FormAlgebra) -> bool {
        let (a, b) = (&self.source.complex, &target.complex);
        let Some((lo, hi)) = a.degree_range_h() else { return true };
        for n in lo..=hi + 1 {
            let f = self.matrix_h(target, n);
            let f1 = self.matrix_h(target, n - 1);
            if b.del_h(n).mul(&f) != f1.mul(&a.del_h(n)) || b.delbar_h(n).mul(&f) != f1.mul(&a.delbar_h(n)) {
                return false;
            }
            if b.sigma_h(n).mul(&f.conj()) != f.mul(&a.sigma_h(n)) {
                return false;
            }
        }
        let unit = |n: i64, k: usize| {
            let mut e = vec![Scalar::zero(); a.degree_dim_h(n)];
            e[k] = Scalar::one();
            e
        };
        for n1 in lo..=hi {
            for n2 in lo..=hi {
                for i in 0..a.degree_dim_h(n1) {
                    for j in 0..a.degree_dim_h(n2) {
                        let (x, y) = (unit(n1, i), unit(n2, j));
                        let lhs = self.matrix_h(target, n1 + n2).apply(&self.source.wedge_h(n1, &x, n2, &y));
                        let fx = self.matrix_h(target, n1).apply(&x);
                        let fy = self.matrix_h(target, n2).apply(&y);
                        if lhs != target.wedge_h(n1, &fx, n2, &fy) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Green data of `W` on the form side: `ω_W ∈ D^{2p}(E, p)` and
/// `g_W ∈ D^{2p−1}(E, p)`, both as realified ambient vectors of the source
/// of the pullback, `p` cohomological.
#[derive(Clone, Debug, PartialEq)]
pub struct FormGreenData {
    pub p: i64,
    pub omega: Vec<Rational>,
    pub g: Vec<Rational>,
}

/// Currents of a form algebra with two supported subcomplexes `S_W`, `S_V`
/// (stored bidegrees of the currents). The complements are `B/S_W`, `B/S_V`
/// and `B/(S_W + S_V)`.
#[derive(Clone, Debug)]
pub struct StarContext {
    pub forms: FormAlgebra,
    pub data: PairingData,
    pub support_w: BTreeMap<Bidegree, CMatrix>,
    pub support_v: BTreeMap<Bidegree, CMatrix>,
}

/// Quotients and Deligne complexes of a [`StarContext`] at one weight.
struct StarPieces {
    qw: Quotient,
    qv: Quotient,
    qwv: Quotient,
    dx: EmbeddedComplex,
    dw: EmbeddedComplex,
    dv: EmbeddedComplex,
    dwv: EmbeddedComplex,
}

fn sum_support(a: &BTreeMap<Bidegree, CMatrix>, b: &BTreeMap<Bidegree, CMatrix>, base: &BigradedComplex) -> BTreeMap<Bidegree, CMatrix> {
    let mut keys: Vec<Bidegree> = a.keys().chain(b.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|k| {
            let z = CMatrix::zeros(base.dim_h(k), 0);
            (k, a.get(&k).unwrap_or(&z).hstack(b.get(&k).unwrap_or(&z)))
        })
        .collect()
}

/// The result of [`star_product`]: the class on the union-complement context
/// and the raw `f*(ω_W) ∧ ω_V` it was assembled from.
#[derive(Clone, Debug)]
pub struct StarResult {
    pub context: DiagramContext,
    pub class: TruncatedClass,
    /// `f*(ω_W) ∧ ω_V` in the realified ambient of `D_{2e}(X)`.
    pub omega_wedge: Vec<Rational>,
    /// `d g̃ = ρ(ω)` holds in the union-complement cone.
    pub closed: bool,
}

impl StarContext {
    pub fn new(forms: FormAlgebra, support_w: BTreeMap<Bidegree, CMatrix>, support_v: BTreeMap<Bidegree, CMatrix>) -> Result<Self, GreenError> {
        if forms.table.is_empty() {
            return Err(GreenError::NoWedgeDefined);
        }
        let data = currents_of(&forms)?;
        let sc = StarContext { forms, data, support_w, support_v };
        for s in [&sc.support_w, &sc.support_v] {
            sc.check_submodule(s)?;
        }
        Ok(sc)
    }

    /// Forms must preserve the span of supported currents.
    fn check_submodule(&self, sub: &BTreeMap<Bidegree, CMatrix>) -> Result<(), GreenError> {
        let b = &self.data.dual;
        let q = quotient_complex(b, sub, "check")?;
        let act = CurrentAction { forms: &self.forms, data: &self.data };
        let (Some((flo, fhi)), Some((blo, bhi))) = (self.forms.complex.degree_range_h(), b.degree_range_h()) else { return Ok(()) };
        for j in blo..=bhi {
            let span = embed_support(b, sub, j);
            if span.cols() == 0 {
                continue;
            }
            for k in flo..=fhi {
                for i in 0..self.forms.complex.degree_dim_h(k) {
                    let mut x = vec![Scalar::zero(); self.forms.complex.degree_dim_h(k)];
                    x[i] = Scalar::one();
                    let img = act.left(k, &x, j).mul(&span);
                    if !q.project_h(b, j + k).mul(&img).is_zero() {
                        return Err(GreenError::NotASubcomplex(format!("forms of degree {} move supported currents of degree {j}", -k)));
                    }
                }
            }
        }
        Ok(())
    }

    fn pieces(&self, e: i64) -> Result<StarPieces, GreenError> {
        let b = &self.data.dual;
        let qw = quotient_complex(b, &self.support_w, "complement(W)")?;
        let qv = quotient_complex(b, &self.support_v, "complement(V)")?;
        let qwv = quotient_complex(b, &sum_support(&self.support_w, &self.support_v, b), "complement(W∪V)")?;
        Ok(StarPieces {
            dx: build_deligne_h(b, e)?,
            dw: build_deligne_h(&qw.complex, e)?,
            dv: build_deligne_h(&qv.complex, e)?,
            dwv: build_deligne_h(&qwv.complex, e)?,
            qw,
            qv,
            qwv,
        })
    }

    /// Restriction context for the support `S` at weight `p` (stored).
    pub fn context_for(&self, which: char, p: i64) -> Result<(DiagramContext, Quotient), GreenError> {
        let sub = if which == 'W' { &self.support_w } else { &self.support_v };
        restriction_context(&self.data.dual, sub, p, &which.to_string())
    }

    /// `X` against `s(D(U_W) ⊕ D(U_V) → D(U_W ∩ U_V))`, whose degree `n` is
    /// `D_n(U_W) ⊕ D_n(U_V) ⊕ D_{n+1}(U_W ∩ U_V)` with
    /// `d(a, b, c) = (da, db, ρa − ρb − dc)`.
    pub fn union_context(&self, e: i64) -> Result<DiagramContext, GreenError> {
        let pc = self.pieces(e)?;
        Ok(self.union_context_from(&pc, e)?.0)
    }

    #[allow(clippy::type_complexity)]
    fn union_context_from(&self, pc: &StarPieces, e: i64) -> Result<(DiagramContext, [BTreeMap<i64, QMatrix>; 4]), GreenError> {
        let b = &self.data.dual;
        let rw = induced(b, &pc.qw.complex, |n| pc.qw.project_h(b, n), &pc.dx, &pc.dw, e)?;
        let rv = induced(b, &pc.qv.complex, |n| pc.qv.project_h(b, n), &pc.dx, &pc.dv, e)?;
        let ww = induced(&pc.qw.complex, &pc.qwv.complex, |n| pc.qwv.project_h(b, n).mul(&pc.qw.lift_h(b, n)), &pc.dw, &pc.dwv, e)?;
        let vv = induced(&pc.qv.complex, &pc.qwv.complex, |n| pc.qwv.project_h(b, n).mul(&pc.qv.lift_h(b, n)), &pc.dv, &pc.dwv, e)?;
        let get = |m: &BTreeMap<i64, QMatrix>, n: i64, rows: usize, cols: usize| m.get(&n).cloned().unwrap_or_else(|| QMatrix::zeros(rows, cols));
        let (cw, cv, cwv) = (&pc.dw.chain, &pc.dv.chain, &pc.dwv.chain);
        let degs: Vec<i64> = match b.degree_range_h() {
            Some((lo, hi)) => (lo - 2..=hi + 1).collect(),
            None => Vec::new(),
        };
        let mut complement = ChainComplex { dims: BTreeMap::new(), d: BTreeMap::new() };
        let mut restriction = BTreeMap::new();
        for &n in &degs {
            complement.dims.insert(n, cw.dim(n) + cv.dim(n) + cwv.dim(n + 1));
        }
        for &n in &degs {
            let (a, bb, c) = (cw.dim(n), cv.dim(n), cwv.dim(n + 1));
            let (a1, b1, c1) = (cw.dim(n - 1), cv.dim(n - 1), cwv.dim(n));
            let z = QMatrix::zeros;
            let row1 = cw.diff(n).hstack(&z(a1, bb)).hstack(&z(a1, c));
            let row2 = z(b1, a).hstack(&cv.diff(n)).hstack(&z(b1, c));
            let row3 = get(&ww, n, c1, a).hstack(&get(&vv, n, c1, bb).scale(&q(-1, 1))).hstack(&cwv.diff(n + 1).scale(&q(-1, 1)));
            complement.d.insert(n, row1.vstack(&row2).vstack(&row3));
            let x = pc.dx.chain.dim(n);
            let r = get(&rw, n, a, x).vstack(&get(&rv, n, bb, x)).vstack(&z(c, x));
            restriction.insert(n, r);
        }
        let ctx = DiagramContext {
            name: format!("{} minus W ∪ V", b.name),
            p: e,
            ambient: pc.dx.clone(),
            complement,
            restriction,
            support_labels: vec!["W".into(), "V".into()],
        };
        Ok((ctx, [rw, rv, ww, vv]))
    }
}

/// Span of the supported currents inside `B_j`.
fn embed_support(b: &BigradedComplex, sub: &BTreeMap<Bidegree, CMatrix>, j: i64) -> CMatrix {
    let lay = b.layout_h(j);
    let blocks: Vec<CMatrix> = lay
        .blocks
        .iter()
        .filter_map(|&(bd, o, d)| {
            let w = sub.get(&bd)?;
            let mut m = CMatrix::zeros(lay.total, w.cols());
            for i in 0..d {
                for k in 0..w.cols() {
                    m.set(o + i, k, w.get(i, k).clone());
                }
            }
            Some(m)
        })
        .collect();
    blocks.into_iter().fold(CMatrix::zeros(lay.total, 0), |acc, m| acc.hstack(&m))
}

/// Realified projection onto `D_n(M, p)` inside its ambient.
fn deligne_projection_h(m: &BigradedComplex, n: i64, p: i64) -> QMatrix {
    let amb = ambient_degree(n, p);
    let (tw, k) = if n <= 2 * p { (p, p) } else { (p + 1, n - p) };
    m.pi_real_h(amb, tw).mul(&m.fkk_h(amb, k, k).realify())
}

/// `𝔤_W ∗_f 𝔤_V = (f*ω_W ∧ ω_V, ((f*g_W ∧ ω_V, f*ω_W ∧ g_V),
/// ∂f*g_W ∧ g_V − ∂̄f*g_W ∧ g_V − f*g_W ∧ ∂g_V + f*g_W ∧ ∂̄g_V)~)`.
///
/// `gw` lives on the source of `pullback`; `gv` is a truncated class on
/// `sc.context_for('V', p_V)`. Each slot is projected to its Deligne space.
pub fn star_product(sc: &StarContext, gw: &FormGreenData, gv: &TruncatedClass, pullback: &Pullback) -> Result<StarResult, GreenError> {
    let forms = &sc.forms;
    let b = &sc.data.dual;
    if !pullback.is_valid_for(forms) {
        return Err(GreenError::DegreeMismatch("pullback is not a map of Dolbeault algebras".into()));
    }
    let (pw, pv) = (gw.p, gv.p);
    let e = pv - pw;
    let src = &pullback.source.complex;
    let len = |n: i64| 2 * src.degree_dim_h(n);
    if gw.omega.len() != len(-2 * pw) || gw.g.len() != len(-2 * pw + 2) {
        return Err(GreenError::DegreeMismatch(format!("form Green data of weight {pw} has the wrong length")));
    }
    // f*ω_W at stored −2p_W, f*g_W at stored −(2p_W − 2)
    let fw = pullback.matrix_h(forms, -2 * pw).apply(&complexify_vec(&gw.omega));
    let fg = pullback.matrix_h(forms, -2 * pw + 2).apply(&complexify_vec(&gw.g));
    let fdg = forms.complex.del_h(-2 * pw + 2).apply(&fg);
    let fdbg = forms.complex.delbar_h(-2 * pw + 2).apply(&fg);
    let (vctx, qv_alone) = sc.context_for('V', pv)?;
    TruncatedClass::new(&vctx, gv.omega.clone(), gv.g.clone())?;
    let pc = sc.pieces(e)?;
    let (ctx, _) = sc.union_context_from(&pc, e)?;
    let act = CurrentAction { forms, data: &sc.data };
    let wedge = |k: i64, x: &[Scalar], j: i64, t: &[Scalar]| act.left(k, x, j).apply(t);

    // ω_V ∈ D_{2p_V}(X), ambient B_{2p_V}
    let omega_v = complexify_vec(&ambient_of(&vctx.ambient, 2 * pv, &gv.omega));
    // g_V ∈ D_{2p_V+1}(U_V), ambient Q_V at 2p_V + 2, lifted to B
    let gv_amb = complexify_vec(&ambient_of(&deligne_of(&qv_alone.complex, pv)?, 2 * pv + 1, &gv.g));
    let gv_lift = qv_alone.lift_h(b, 2 * pv + 2).apply(&gv_amb);
    let del_gv = b.del_h(2 * pv + 2).apply(&gv_lift);
    let delbar_gv = b.delbar_h(2 * pv + 2).apply(&gv_lift);

    let omega_raw = wedge(-2 * pw, &fw, 2 * pv, &omega_v);
    let omega_proj = deligne_projection_h(b, 2 * e, e).apply(&realify_vec(&omega_raw));
    let omega = coords_in(&pc.dx, 2 * e, &omega_proj)?;

    let slot = |q: &Quotient, dc: &EmbeddedComplex, n: i64, v: Vec<Scalar>| -> Result<Vec<Rational>, GreenError> {
        let amb = ambient_degree(n, e);
        let projected = q.project_h(b, amb).apply(&v);
        let real = deligne_projection_h(&q.complex, n, e).apply(&realify_vec(&projected));
        coords_in(dc, n, &real)
    };
    let a = slot(&pc.qw, &pc.dw, 2 * e + 1, wedge(-2 * pw + 2, &fg, 2 * pv, &omega_v))?;
    let bslot = slot(&pc.qv, &pc.dv, 2 * e + 1, wedge(-2 * pw, &fw, 2 * pv + 2, &gv_lift))?;
    let k1 = -2 * pw + 1;
    let k0 = -2 * pw + 2;
    let terms = [
        wedge(k1, &fdg, 2 * pv + 2, &gv_lift),
        wedge(k1, &fdbg, 2 * pv + 2, &gv_lift).into_iter().map(|x| -x).collect(),
        wedge(k0, &fg, 2 * pv + 1, &del_gv).into_iter().map(|x| -x).collect(),
        wedge(k0, &fg, 2 * pv + 1, &delbar_gv),
    ];
    let mut c = vec![Scalar::zero(); b.degree_dim_h(2 * e + 3)];
    for t in &terms {
        for (x, y) in c.iter_mut().zip(t) {
            *x += y;
        }
    }
    let cslot = slot(&pc.qwv, &pc.dwv, 2 * e + 2, c)?;
    let g: Vec<Rational> = a.into_iter().chain(bslot).chain(cslot).collect();
    let closed = ctx.complement.diff(2 * e + 1).apply(&g) == ctx.rho(2 * e).apply(&omega)
        && ctx.ambient.chain.diff(2 * e).apply(&omega).iter().all(|x| x.is_zero());
    let g_image = QSubspace::span_of(&ctx.complement.diff(2 * e + 2));
    let class = TruncatedClass { p: e, omega, g, g_image };
    Ok(StarResult { context: ctx, class, omega_wedge: realify_vec(&omega_raw), closed })
}

fn deligne_of(b: &BigradedComplex, p: i64) -> Result<EmbeddedComplex, GreenError> {
    Ok(build_deligne_h(b, p)?)
}

/// Realified ambient vector of a truncated class's `ω`.
pub fn omega_ambient(ctx: &DiagramContext, tc: &TruncatedClass) -> Vec<Rational> {
    ambient_of(&ctx.ambient, 2 * ctx.p, &tc.omega)
}
