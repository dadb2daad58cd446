//! Finite model complexes: compact Kähler minimal models, jet truncations
//! at a point, their short exact sequences and duals.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::deligne::FormAction;
use crate::dolbeault::{validate_dolbeault, Bidegree, BigradedComplex, Variance};
use crate::exactnum::{CMatrix, Field, Scalar};

mod semipurity;
mod sequences;

pub use semipurity::*;
pub use sequences::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("bad truncation order: {0}")]
    BadOrder(String),
}

/// A generator: stored bidegree and index inside that block.
pub type Gen = (Bidegree, usize);

/// A Dolbeault complex with a bilinear wedge on basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct FormAlgebra {
    pub complex: BigradedComplex,
    /// `g ∧ h` on generators (stored bidegrees). Missing pairs are zero.
    pub table: BTreeMap<(Gen, Gen), Vec<(Gen, Scalar)>>,
    /// Linear functional `∫` on generators of top bidegree, if compact.
    pub integral: BTreeMap<Gen, Scalar>,
}

impl FormAlgebra {
    pub fn variance(&self) -> Variance {
        self.complex.variance
    }

    fn position(&self, g: Gen) -> (i64, usize) {
        let n = g.0 .0 + g.0 .1;
        let (off, _) = self.complex.layout_h(n).offset(g.0).expect("generator in support");
        (n, off + g.1)
    }

    /// `x ∧ y` for coordinate vectors of stored degrees `n1`, `n2`.
    pub fn wedge_h(&self, n1: i64, x: &[Scalar], n2: i64, y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.complex.degree_dim_h(n1 + n2)];
        let (l1, l2) = (self.complex.layout_h(n1), self.complex.layout_h(n2));
        for &(b1, o1, d1) in &l1.blocks {
            for i in 0..d1 {
                let xi = &x[o1 + i];
                if xi.is_zero() {
                    continue;
                }
                for &(b2, o2, d2) in &l2.blocks {
                    for j in 0..d2 {
                        let yj = &y[o2 + j];
                        if yj.is_zero() {
                            continue;
                        }
                        let Some(terms) = self.table.get(&((b1, i), (b2, j))) else { continue };
                        let c = xi * yj;
                        for (g, s) in terms {
                            let (_, k) = self.position(*g);
                            out[k] += &(&c * s);
                        }
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x ∧ y` from `A_{n2}` to `A_{n1+n2}`.
    pub fn left_mult_h(&self, n1: i64, x: &[Scalar], n2: i64) -> CMatrix {
        let m = self.complex.degree_dim_h(n2);
        let cols: Vec<Vec<Scalar>> = (0..m)
            .map(|j| {
                let mut e = vec![Scalar::zero(); m];
                e[j] = Scalar::one();
                self.wedge_h(n1, x, n2, &e)
            })
            .collect();
        CMatrix::from_columns(self.complex.degree_dim_h(n1 + n2), &cols)
    }

    /// Matrix of `x ↦ x ∧ y` from `A_{n1}` to `A_{n1+n2}`.
    pub fn right_mult_h(&self, n1: i64, n2: i64, y: &[Scalar]) -> CMatrix {
        let m = self.complex.degree_dim_h(n1);
        let cols: Vec<Vec<Scalar>> = (0..m)
            .map(|j| {
                let mut e = vec![Scalar::zero(); m];
                e[j] = Scalar::one();
                self.wedge_h(n1, &e, n2, y)
            })
            .collect();
        CMatrix::from_columns(self.complex.degree_dim_h(n1 + n2), &cols)
    }

    /// The unit function, as a vector in stored degree 0.
    pub fn unit(&self) -> Vec<Scalar> {
        let lay = self.complex.layout_h(0);
        let mut v = vec![Scalar::zero(); lay.total];
        if let Some((o, _)) = lay.offset((0, 0)) {
            v[o] = Scalar::one();
        }
        v
    }

    /// Generator pairs `(x, y)` where `∂` or `∂̄` fails the graded Leibniz
    /// rule `δ(x∧y) = δx∧y + (−1)^{|x|} x∧δy`.
    pub fn leibniz_failures(&self) -> Vec<(Gen, Gen)> {
        let mut out = Vec::new();
        let Some((lo, hi)) = self.complex.degree_range_h() else { return out };
        let basis = |n: i64, k: usize| {
            let mut e = vec![Scalar::zero(); self.complex.degree_dim_h(n)];
            e[k] = Scalar::one();
            e
        };
        for n1 in lo..=hi {
            for n2 in lo..=hi {
                for (i, &g1) in self.generators_h(n1).iter().enumerate() {
                    for (j, &g2) in self.generators_h(n2).iter().enumerate() {
                        let (x, y) = (basis(n1, i), basis(n2, j));
                        let xy = self.wedge_h(n1, &x, n2, &y);
                        let ok = [BigradedComplex::del_h, BigradedComplex::delbar_h].iter().all(|op| {
                            let lhs = op(&self.complex, n1 + n2).apply(&xy);
                            let a = self.wedge_h(n1 - 1, &op(&self.complex, n1).apply(&x), n2, &y);
                            let b = self.wedge_h(n1, &x, n2 - 1, &op(&self.complex, n2).apply(&y));
                            let s = Scalar::sign(n1);
                            lhs.iter().zip(a.iter().zip(&b)).all(|(l, (a, b))| *l == (a + &(&s * b)))
                        });
                        if !ok {
                            out.push((g1, g2));
                        }
                    }
                }
            }
        }
        out
    }

    /// Generators of a stored degree in layout order.
    pub fn generators_h(&self, n: i64) -> Vec<Gen> {
        self.complex.layout_h(n).blocks.iter().flat_map(|&(b, _, d)| (0..d).map(move |k| (b, k))).collect()
    }
}

impl FormAction for FormAlgebra {
    fn forms(&self) -> &BigradedComplex {
        &self.complex
    }
    fn module(&self) -> &BigradedComplex {
        &self.complex
    }
    fn left(&self, k: i64, x: &[Scalar], j: i64) -> CMatrix {
        self.left_mult_h(k, x, j)
    }
}

fn gen_u(a: &BigradedComplex, b: Bidegree, k: usize) -> Gen {
    let s = a.variance.sign();
    ((s * b.0, s * b.1), k)
}

/// Names accepted by [`kahler_model`].
pub const KAHLER_MODELS: [&str; 5] = ["point", "P1", "P2", "P3", "elliptic"];

/// Zero-differential minimal model of a compact Kähler manifold.
pub fn kahler_model(name: &str) -> Result<FormAlgebra, ModelError> {
    match name {
        "point" | "P0" => Ok(projective_space(0)),
        "P1" => Ok(projective_space(1)),
        "P2" => Ok(projective_space(2)),
        "P3" => Ok(projective_space(3)),
        "elliptic" => Ok(elliptic_curve()),
        other => Err(ModelError::UnknownModel(other.to_string())),
    }
}

/// `P^n` with generators `ω^k` at `(k, k)`.
pub fn projective_space(n: i64) -> FormAlgebra {
    let dims: BTreeMap<Bidegree, usize> = (0..=n).map(|k| ((k, k), 1)).collect();
    let sigma = (0..=n).map(|k| ((k, k), CMatrix::identity(1))).collect();
    let name = if n == 0 { "point".to_string() } else { format!("P{n}") };
    let complex = BigradedComplex::new(name, Variance::Cohomological, Some(n), dims, BTreeMap::new(), BTreeMap::new(), sigma)
        .expect("well-formed");
    let mut table = BTreeMap::new();
    for a in 0..=n {
        for b in 0..=n - a {
            let g = |k: i64| gen_u(&complex, (k, k), 0);
            table.insert((g(a), g(b)), vec![(g(a + b), Scalar::one())]);
        }
    }
    let integral = BTreeMap::from([(gen_u(&complex, (n, n), 0), Scalar::one())]);
    FormAlgebra { complex, table, integral }
}

/// Elliptic curve with basis `1, dz, dz̄, v = (i/2) dz∧dz̄`, `∫v = 1`.
pub fn elliptic_curve() -> FormAlgebra {
    let dims = BTreeMap::from([((0, 0), 1), ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)]);
    let one = CMatrix::identity(1);
    let sigma = BTreeMap::from([((0, 0), one.clone()), ((1, 0), one.clone()), ((0, 1), one.clone()), ((1, 1), one)]);
    let complex = BigradedComplex::new("elliptic", Variance::Cohomological, Some(1), dims, BTreeMap::new(), BTreeMap::new(), sigma)
        .expect("well-formed");
    let g = |b: Bidegree| gen_u(&complex, b, 0);
    let (u, dz, dzb, v) = (g((0, 0)), g((1, 0)), g((0, 1)), g((1, 1)));
    let mut table = BTreeMap::new();
    for x in [u, dz, dzb, v] {
        table.insert((u, x), vec![(x, Scalar::one())]);
        table.insert((x, u), vec![(x, Scalar::one())]);
    }
    // dz∧dz̄ = −2i v, dz̄∧dz = 2i v
    table.insert((dz, dzb), vec![(v, Scalar::new(crate::exactnum::qi(0), crate::exactnum::qi(-2)))]);
    table.insert((dzb, dz), vec![(v, Scalar::new(crate::exactnum::qi(0), crate::exactnum::qi(2)))]);
    let integral = BTreeMap::from([(v, Scalar::one())]);
    FormAlgebra { complex, table, integral }
}

/// `P¹` with one extra real function `u`: basis `1, u` at `(0,0)`, `∂u`,
/// `∂̄u`, and `v, w = i∂∂̄u` at `(1,1)`. Products among `u, ∂u, ∂̄u, w` and
/// with `v` vanish, so `u` behaves like a function vanishing to high order
/// at the point where `1` is evaluated. Cohomology is still `1, 0, 1`.
pub fn p1_with_function() -> FormAlgebra {
    let dims = BTreeMap::from([((0, 0), 2), ((1, 0), 1), ((0, 1), 1), ((1, 1), 2)]);
    let c = |re: i64, im: i64| Scalar::new(crate::exactnum::qi(re), crate::exactnum::qi(im));
    let row = |v: Vec<Scalar>| CMatrix::from_rows(vec![v], 2);
    let col = |a: Scalar, b: Scalar| CMatrix::from_rows(vec![vec![a], vec![b]], 1);
    // ∂∂̄u = −i w, ∂̄∂u = i w
    let del = BTreeMap::from([((0, 0), row(vec![c(0, 0), c(1, 0)])), ((0, 1), col(c(0, 0), c(0, -1)))]);
    let delbar = BTreeMap::from([((0, 0), row(vec![c(0, 0), c(1, 0)])), ((1, 0), col(c(0, 0), c(0, 1)))]);
    let one = CMatrix::identity(1);
    let sigma = BTreeMap::from([((0, 0), CMatrix::identity(2)), ((1, 0), one.clone()), ((0, 1), one), ((1, 1), CMatrix::identity(2))]);
    let complex = BigradedComplex::new("P1+u", Variance::Cohomological, Some(1), dims, del, delbar, sigma).expect("well-formed");
    let g = |b: Bidegree, k: usize| gen_u(&complex, b, k);
    let unit = g((0, 0), 0);
    let mut table = BTreeMap::new();
    for x in [unit, g((0, 0), 1), g((1, 0), 0), g((0, 1), 0), g((1, 1), 0), g((1, 1), 1)] {
        table.insert((unit, x), vec![(x, Scalar::one())]);
        table.insert((x, unit), vec![(x, Scalar::one())]);
    }
    let integral = BTreeMap::from([(g((1, 1), 0), Scalar::one())]);
    FormAlgebra { complex, table, integral }
}

/// Monomial `t^a t̄^b` inside a block of the jet model.
fn jet_monomials(bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    for total in 0..=bound {
        for a in (0..=total).rev() {
            out.push((a, total - a));
        }
    }
    out
}

/// Weight bound of the coefficients in each user bidegree.
fn jet_bound(n: i64, b: Bidegree) -> i64 {
    n - b.0 - b.1
}

/// Jets of forms at a point of a curve: polynomials in `t, t̄` whose total
/// weight (`t, t̄, dt, dt̄` all of weight one) is at most `n`.
pub fn jet_model(n: i64) -> Result<FormAlgebra, ModelError> {
    if n < 1 {
        return Err(ModelError::BadOrder(format!("truncation order {n} < 1")));
    }
    Ok(weighted_jets(n, 0, format!("jet({n})")))
}

/// Jets of weight in `[low, n]`. For `low = 0` this is the jet model; for
/// `low > 0` it is the sub-complex of jets vanishing to order `low`.
fn weighted_jets(n: i64, low: i64, name: String) -> FormAlgebra {
    let bideg = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let keep = |b: Bidegree, (a, c): (i64, i64)| a + c + b.0 + b.1 >= low;
    let monos: BTreeMap<Bidegree, Vec<(i64, i64)>> = bideg
        .iter()
        .map(|&b| (b, jet_monomials(jet_bound(n, b)).into_iter().filter(|&m| keep(b, m)).collect()))
        .collect();
    let idx = |b: Bidegree, m: (i64, i64)| monos[&b].iter().position(|&x| x == m);
    let dims: BTreeMap<Bidegree, usize> = monos.iter().map(|(&b, v)| (b, v.len())).collect();
    let dim = |b: Bidegree| dims[&b];
    let mut del: BTreeMap<Bidegree, CMatrix> = BTreeMap::new();
    let mut delbar: BTreeMap<Bidegree, CMatrix> = BTreeMap::new();
    let mut sigma: BTreeMap<Bidegree, CMatrix> = BTreeMap::new();
    let int = |k: i64| Scalar::from_int(k);
    // cohomological: ∂ raises the first index, ∂̄ the second
    let put = |map: &mut BTreeMap<Bidegree, CMatrix>, src: Bidegree, dst: Bidegree, j: usize, m: (i64, i64), c: Scalar| {
        let e = map.entry(src).or_insert_with(|| CMatrix::zeros(dim(dst), dim(src)));
        if let Some(i) = idx(dst, m) {
            let v = e.get(i, j).plus(&c);
            e.set(i, j, v);
        }
    };
    for (j, &(a, b)) in monos[&(0, 0)].iter().enumerate() {
        if a > 0 {
            put(&mut del, (0, 0), (1, 0), j, (a - 1, b), int(a));
        }
        if b > 0 {
            put(&mut delbar, (0, 0), (0, 1), j, (a, b - 1), int(b));
        }
    }
    for (j, &(a, b)) in monos[&(0, 1)].iter().enumerate() {
        // ∂(f dt̄) = f_t dt∧dt̄
        if a > 0 {
            put(&mut del, (0, 1), (1, 1), j, (a - 1, b), int(a));
        }
    }
    for (j, &(a, b)) in monos[&(1, 0)].iter().enumerate() {
        // ∂̄(f dt) = −f_t̄ dt∧dt̄
        if b > 0 {
            put(&mut delbar, (1, 0), (1, 1), j, (a, b - 1), int(-b));
        }
    }
    let flip_sign = |b: Bidegree| if b == (1, 1) { -1 } else { 1 };
    for &b in &bideg {
        let tgt = (b.1, b.0);
        let mut s = CMatrix::zeros(dim(tgt), dim(b));
        for (j, &(x, y)) in monos[&b].iter().enumerate() {
            if let Some(i) = idx(tgt, (y, x)) {
                s.set(i, j, int(flip_sign(b)));
            }
        }
        sigma.insert(b, s);
    }
    let complex = BigradedComplex::new(name, Variance::Cohomological, Some(1), dims.clone(), del, delbar, sigma)
        .expect("well-formed jet model");
    // wedge with truncation
    let mut table = BTreeMap::new();
    let form_sign = |b1: Bidegree, b2: Bidegree| -> Option<(Bidegree, i64)> {
        let tgt = (b1.0 + b2.0, b1.1 + b2.1);
        if tgt.0 > 1 || tgt.1 > 1 {
            return None;
        }
        // dt̄ ∧ dt = −dt ∧ dt̄
        let sign = if b1 == (0, 1) && b2 == (1, 0) { -1 } else { 1 };
        Some((tgt, sign))
    };
    for &b1 in &bideg {
        for &b2 in &bideg {
            let Some((tgt, sign)) = form_sign(b1, b2) else { continue };
            for (i, &(a1, c1)) in monos[&b1].iter().enumerate() {
                for (j, &(a2, c2)) in monos[&b2].iter().enumerate() {
                    if let Some(k) = idx(tgt, (a1 + a2, c1 + c2)) {
                        let g1 = gen_u(&complex, b1, i);
                        let g2 = gen_u(&complex, b2, j);
                        table.insert((g1, g2), vec![(gen_u(&complex, tgt, k), int(sign))]);
                    }
                }
            }
        }
    }
    FormAlgebra { complex, table, integral: BTreeMap::new() }
}

/// Short exact sequence `0 → sub → mid → quo → 0` of Dolbeault complexes,
/// with chain maps given per stored bidegree.
#[derive(Clone, Debug, PartialEq)]
pub struct SesTriple {
    pub sub: BigradedComplex,
    pub mid: BigradedComplex,
    pub quo: BigradedComplex,
    /// `sub → mid`, keyed by stored bidegree.
    pub inj: BTreeMap<Bidegree, CMatrix>,
    /// `mid → quo`, keyed by stored bidegree.
    pub surj: BTreeMap<Bidegree, CMatrix>,
}

/// Assemble a bidegree-wise map into a stored-degree matrix.
pub fn degree_map_h(src: &BigradedComplex, dst: &BigradedComplex, maps: &BTreeMap<Bidegree, CMatrix>, n: i64) -> CMatrix {
    let (ls, ld) = (src.layout_h(n), dst.layout_h(n));
    let mut m = CMatrix::zeros(ld.total, ls.total);
    for &(b, so, sd) in &ls.blocks {
        let (Some(block), Some((to, td))) = (maps.get(&b), ld.offset(b)) else { continue };
        for i in 0..td {
            for j in 0..sd {
                m.set(to + i, so + j, block.get(i, j).clone());
            }
        }
    }
    m
}

/// Jets of order `≤ n`; sub = jets vanishing to order `≥ k`; quotient =
/// jets of order `≤ k−1`.
pub fn ses_jet(n: i64, k: i64) -> Result<SesTriple, ModelError> {
    if n < 1 || k < 1 || k > n {
        return Err(ModelError::BadOrder(format!("need 1 ≤ k ≤ N, got N = {n}, k = {k}")));
    }
    let mid = weighted_jets(n, 0, format!("jet({n})")).complex;
    let sub = weighted_jets(n, k, format!("jet({n}) vanishing to order {k}")).complex;
    let quo = weighted_jets(k - 1, 0, format!("jet({})", k - 1)).complex;
    let bideg = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let mono = |nn: i64, low: i64, b: Bidegree| -> Vec<(i64, i64)> {
        jet_monomials(jet_bound(nn, b)).into_iter().filter(|&(a, c)| a + c + b.0 + b.1 >= low).collect()
    };
    let mut inj = BTreeMap::new();
    let mut surj = BTreeMap::new();
    for &b in &bideg {
        let sb = (-b.0, -b.1);
        let (ms, mm, mq) = (mono(n, k, b), mono(n, 0, b), mono(k - 1, 0, b));
        let mut i_m = CMatrix::zeros(mm.len(), ms.len());
        for (j, m) in ms.iter().enumerate() {
            let i = mm.iter().position(|x| x == m).expect("sub monomial in mid");
            i_m.set(i, j, Scalar::one());
        }
        let mut s_m = CMatrix::zeros(mq.len(), mm.len());
        for (j, m) in mm.iter().enumerate() {
            if let Some(i) = mq.iter().position(|x| x == m) {
                s_m.set(i, j, Scalar::one());
            }
        }
        inj.insert(sb, i_m);
        surj.insert(sb, s_m);
    }
    Ok(SesTriple { sub, mid, quo, inj, surj })
}

/// Per-degree exactness verdict for a short exact sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SesExactness {
    pub injective: bool,
    pub surjective: bool,
    pub composition_zero: bool,
    pub middle_exact: bool,
    pub chain_maps: bool,
}

impl SesExactness {
    pub fn ok(&self) -> bool {
        self.injective && self.surjective && self.composition_zero && self.middle_exact && self.chain_maps
    }
}

pub fn ses_exactness(s: &SesTriple) -> SesExactness {
    let mut out = SesExactness { injective: true, surjective: true, composition_zero: true, middle_exact: true, chain_maps: true };
    let Some((lo, hi)) = s.mid.degree_range_h() else { return out };
    for n in lo..=hi {
        let i = degree_map_h(&s.sub, &s.mid, &s.inj, n);
        let p = degree_map_h(&s.mid, &s.quo, &s.surj, n);
        out.injective &= i.rank() == i.cols();
        out.surjective &= p.rank() == p.rows();
        out.composition_zero &= p.mul(&i).is_zero();
        out.middle_exact &= i.cols() + p.rows() == i.rows();
        let i1 = degree_map_h(&s.sub, &s.mid, &s.inj, n - 1);
        let p1 = degree_map_h(&s.mid, &s.quo, &s.surj, n - 1);
        for del in [true, false] {
            let d = |c: &BigradedComplex, m: i64| if del { c.del_h(m) } else { c.delbar_h(m) };
            out.chain_maps &= d(&s.mid, n).mul(&i) == i1.mul(&d(&s.sub, n));
            out.chain_maps &= d(&s.quo, n).mul(&p) == p1.mul(&d(&s.mid, n));
        }
    }
    out
}

/// Every model of the acceptance suite, by name.
pub fn suite() -> Vec<FormAlgebra> {
    let mut out: Vec<FormAlgebra> = KAHLER_MODELS
        .iter()
        .map(|n| kahler_model(n).expect("known model"))
        .collect();
    for n in 1..=5 {
        out.push(jet_model(n).expect("valid order"));
    }
    out
}

pub fn is_valid(a: &BigradedComplex) -> bool {
    validate_dolbeault(a).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_valid() {
        for m in suite() {
            assert!(validate_dolbeault(&m.complex).is_empty(), "{}: {:?}", m.complex.name, validate_dolbeault(&m.complex));
        }
    }

    #[test]
    fn wedges_obey_leibniz() {
        for m in suite() {
            assert!(m.leibniz_failures().is_empty(), "{}", m.complex.name);
        }
        let mut t = p1_with_function();
        assert!(is_valid(&t.complex));
        assert!(t.leibniz_failures().is_empty());
        // u·u = u breaks ∂(u·u) = 2u·∂u
        let u = gen_u(&t.complex, (0, 0), 1);
        t.table.insert((u, u), vec![(u, Scalar::one())]);
        assert!(t.leibniz_failures().contains(&(u, u)));
    }

    #[test]
    fn p1_with_function_has_p1_cohomology() {
        let a = p1_with_function().complex;
        let h: Vec<usize> = (0..=2).map(|k| a.degree_dim_h(-k) - a.d_h(-k).rank() - a.d_h(-k + 1).rank()).collect();
        assert_eq!(h, vec![1, 0, 1]);
    }

    #[test]
    fn jet_dimensions() {
        let j = jet_model(3).unwrap();
        assert_eq!(j.complex.dims()[&(0, 0)], 10);
        assert_eq!(j.complex.dims()[&(1, 0)], 6);
        assert_eq!(j.complex.dims()[&(1, 1)], 3);
    }

    #[test]
    fn ses_is_exact() {
        for n in 1..=4 {
            for k in 1..=n {
                let s = ses_jet(n, k).unwrap();
                assert!(ses_exactness(&s).ok(), "({n},{k})");
            }
        }
        assert!(ses_jet(3, 4).is_err());
    }

    #[test]
    fn dbar_cohomology_grows() {
        let dims: Vec<usize> = (1..=5).map(|n| jet_model(n).unwrap().complex.dbar_cohomology_dim((0, 0))).collect();
        assert_eq!(dims, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn jet_total_cohomology() {
        // formal Poincaré lemma: only the constants survive
        for n in 2..=4 {
            let a = jet_model(n).unwrap().complex;
            let h: Vec<usize> = (0..=2)
                .map(|k| {
                    let d_out = a.d_h(-k).rank();
                    let d_in = a.d_h(-k + 1).rank();
                    a.degree_dim_h(-k) - d_out - d_in
                })
                .collect();
            assert_eq!(h, vec![1, 0, 0], "N={n}");
        }
    }
}
