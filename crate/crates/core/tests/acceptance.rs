//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use deligne_core::cli::{run, suite_commands};
use deligne_core::deligne::{build_deligne, degenerate_range_check, homotopy_maps, ConeSign, DegenerateRange};
use deligne_core::dolbeault::{validate_dolbeault, BigradedComplex};
use deligne_core::duality::{
    check_pairing_action_signs, check_pairing_differential_signs, currents_of, exceptional_duality, poincare_iso_check,
};
use deligne_core::exactnum::{realify_vec, CMatrix, Field, Rational, Scalar};
use deligne_core::green::{
    a_map, is_green_for, omega_ambient, omega_map, p1_green_context, star_product, FormGreenData, GreenVerdict, Pullback, StarContext,
};
use deligne_core::models::{
    deligne_ses_exactness, dualize_ses, formal_deligne_point_complex, jet_model, kahler_model, les_check, point_family, semipurity_scan,
    ses_jet, suite, KAHLER_MODELS,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(t: Duration, limit: Option<Duration>) -> Result<(), String> {
    match limit {
        Some(l) if t > l => Err(format!("took {t:?}, limit {l:?}")),
        _ => Ok(()),
    }
}

/// Bidegree index range of `a`, widened by `pad` on both sides.
fn p_window(a: &BigradedComplex, pad: i64) -> Vec<i64> {
    let idx: Vec<i64> = a.dims().keys().flat_map(|&(p, q)| [p, q]).collect();
    let lo = idx.iter().copied().min().unwrap_or(0);
    let hi = idx.iter().copied().max().unwrap_or(0);
    (lo - pad..=hi + pad).collect()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn dolbeault_validity() -> Outcome {
    let models = suite();
    for f in &models {
        let r = validate_dolbeault(&f.complex);
        ensure(r.is_empty(), || format!("{}: {r:?}", f.complex.name))?;
    }
    Ok(format!("{} models", models.len()))
}

fn deligne_d_squared() -> Outcome {
    let mut checked = 0;
    for f in suite() {
        for p in p_window(&f.complex, 2) {
            let d = build_deligne(&f.complex, p).map_err(|e| e.to_string())?;
            let bad = d.chain().d_squared_failures();
            ensure(bad.is_empty(), || format!("{} p={p}: degrees {bad:?}", f.complex.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (model, p) pairs"))
}

fn homotopy_certificate() -> Outcome {
    let mut signs = BTreeMap::new();
    let mut degrees = 0;
    for f in suite() {
        for p in p_window(&f.complex, 2) {
            let m = homotopy_maps(&f.complex, p).map_err(|e| format!("{} p={p}: {e}", f.complex.name))?;
            degrees += m.checked_degrees.len();
            *signs.entry(m.sign.describe()).or_insert(0) += 1;
        }
    }
    ensure(signs.len() == 1 && signs.contains_key(ConeSign::UMinusDOmega.describe()), || format!("cone conventions used: {signs:?}"))?;
    Ok(format!("{degrees} degrees, cone {}", ConeSign::UMinusDOmega.describe()))
}

fn degenerate_ranges() -> Outcome {
    let (mut above, mut below) = (0, 0);
    for f in suite() {
        for p in p_window(&f.complex, 3) {
            let c = degenerate_range_check(&f.complex, p).map_err(|e| e.to_string())?;
            match c.range {
                DegenerateRange::Inside => continue,
                DegenerateRange::RealComplex => above += 1,
                DegenerateRange::ShiftedRealComplex => below += 1,
            }
            ensure(c.equal, || format!("{} p={p}: {:?} vs {:?}", f.complex.name, c.deligne, c.real))?;
        }
    }
    ensure(above > 0 && below > 0, || "a range was never exercised".into())?;
    Ok(format!("{above} above, {below} below"))
}

fn ses_grid() -> Vec<(i64, i64)> {
    (1..=4).flat_map(|n| (1..=n).map(move |k| (n, k))).collect()
}

fn functor_exactness() -> Outcome {
    let mut count = 0;
    for (n, k) in ses_grid() {
        let s = ses_jet(n, k).map_err(|e| e.to_string())?;
        for p in 0..=3 {
            let r = deligne_ses_exactness(&s, p).map_err(|e| e.to_string())?;
            ensure(r.iter().all(|d| d.ok()), || format!("N={n} k={k} p={p}: {r:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} sequences"))
}

fn les_exactness() -> Outcome {
    let mut count = 0;
    for (n, k) in ses_grid() {
        let s = ses_jet(n, k).map_err(|e| e.to_string())?;
        let d = dualize_ses(&s).map_err(|e| e.to_string())?;
        for p in 0..=3 {
            for (label, t) in [("forms", &s), ("currents", &d)] {
                let r = les_check(t, p).map_err(|e| e.to_string())?;
                ensure(r.passed(), || format!("{label} N={n} k={k} p={p}: {r:?}"))?;
                ensure(r.euler_characteristic == 0, || format!("{label} N={n} k={k} p={p}: euler {}", r.euler_characteristic))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} long exact sequences"))
}

fn sign_tables() -> Outcome {
    let f = jet_model(2).map_err(|e| e.to_string())?;
    let data = currents_of(&f).map_err(|e| e.to_string())?;
    let w: Vec<i64> = (-1..=3).collect();
    let d = check_pairing_differential_signs(&data, &w, &w).map_err(|e| e.to_string())?;
    let a = check_pairing_action_signs(&f, &data, &w, &w, &w, &w).map_err(|e| e.to_string())?;
    ensure(d.regimes.len() == 2 && a.regimes.len() == 4, || "regime count".into())?;
    ensure(d.passed() && a.passed(), || format!("violations: {d:?} {a:?}"))?;
    ensure(d.all_hit() && a.all_hit(), || format!("regime never hit: {d:?} {a:?}"))?;
    let hits: Vec<usize> = d.regimes.iter().chain(&a.regimes).map(|r| r.nonzero).collect();
    Ok(format!("nonzero hits per regime {hits:?}"))
}

fn exceptional() -> Outcome {
    let mut nonempty = 0;
    for name in KAHLER_MODELS {
        let f = kahler_model(name).map_err(|e| e.to_string())?;
        let d = f.complex.dimension.unwrap_or(0);
        let data = currents_of(&f).map_err(|e| e.to_string())?;
        for p in -1..=d + 2 {
            for n in -1..=2 * d + 2 {
                let g = exceptional_duality(&f, &data, n, p).map_err(|e| e.to_string())?;
                if g.rows > 0 && g.cols > 0 {
                    nonempty += 1;
                }
                // one empty side against a nonzero one would be a failure too
                ensure(g.perfect, || format!("{name} n={n} p={p}: {}x{} rank {}", g.rows, g.cols, g.rank))?;
            }
        }
    }
    Ok(format!("{nonempty} nonempty Gram matrices"))
}

fn poincare() -> Outcome {
    let mut isos = 0;
    for name in ["P1", "elliptic"] {
        let f = kahler_model(name).map_err(|e| e.to_string())?;
        let d = f.complex.dimension.unwrap_or(0);
        let data = currents_of(&f).map_err(|e| e.to_string())?;
        ensure(data.adjointness_holds(), || format!("{name}: adjointness"))?;
        let ns: Vec<i64> = (-1..=2 * d + 1).collect();
        let ps: Vec<i64> = (-1..=d + 1).collect();
        let r = poincare_iso_check(&f, &data, &ns, &ps).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{name}: {:?}", r.entries.iter().filter(|e| !e.iso).collect::<Vec<_>>()))?;
        isos += r.entries.iter().filter(|e| e.source_dim > 0).count();
    }
    Ok(format!("{isos} nonzero isomorphisms"))
}

fn semipurity() -> Outcome {
    let orders: Vec<i64> = (1..=5).collect();
    let fam = point_family(&orders).map_err(|e| e.to_string())?;
    let ns: Vec<i64> = (-2..=7).collect();
    let t = semipurity_scan(&fam, &(0..=4).collect::<Vec<_>>(), &ns).map_err(|e| e.to_string())?;
    ensure(t.rows.len() == 25, || format!("{} grid points", t.rows.len()))?;
    ensure(t.passed(), || format!("{:?}", t.rows.iter().filter(|r| !r.violations.is_empty()).collect::<Vec<_>>()))?;
    Ok("25 grid points".into())
}

fn infinite_dimensionality() -> Outcome {
    let mut last = 0;
    let mut seen = Vec::new();
    for n in 1..=5 {
        let j = jet_model(n).map_err(|e| e.to_string())?;
        let h = j.complex.dbar_cohomology_dim((0, 0));
        ensure(h == n as usize + 1 && h > last, || format!("N={n}: {h}"))?;
        last = h;
        seen.push(h);
    }
    Ok(format!("{seen:?}"))
}

fn green_layer() -> Outcome {
    let c = p1_green_context().map_err(|e| e.to_string())?;
    let support = c.ctx.support_complex();
    let n1 = 2 * c.ctx.p + 1;
    for s in -2..=3 {
        let tc = c.scaled_class(&q(s));
        let v = is_green_for(&c.ctx, &tc, &c.delta).map_err(|e| e.to_string())?;
        ensure(v.is_green() == (s == 1), || format!("s={s}: {v:?}"))?;
        match v {
            GreenVerdict::Green { witness, correction } => {
                // the witness must actually solve the equation
                let x: Vec<Rational> = witness.iter().chain(&correction).map(|t| t.parse().unwrap()).collect();
                let mut target: Vec<Rational> = tc.omega.iter().zip(&c.delta).map(|(a, b)| a - b).collect();
                target.extend(tc.g.iter().cloned());
                ensure(support.diff(n1).apply(&x) == target, || "witness does not solve".into())?;
            }
            GreenVerdict::NotGreen { obstruction } => {
                ensure(obstruction.iter().any(|t| t != "0"), || format!("s={s}: zero obstruction"))?;
            }
        }
    }
    // ω∘a = d_D
    let k = c.green.len();
    let d = c.ctx.ambient.chain.diff(n1);
    for i in 0..k {
        let mut eta = vec![q(0); k];
        eta[i] = q(1);
        let tc = a_map(&c.ctx, &eta).map_err(|e| e.to_string())?;
        ensure(omega_map(&tc) == d.apply(&eta), || format!("basis vector {i}"))?;
    }
    // star ω-slot
    let b = &c.data.dual;
    let mut e = CMatrix::zeros(b.dim_h((0, 0)), 1);
    e.set(0, 0, Scalar::one());
    let point = BTreeMap::from([((0, 0), e)]);
    let sc = StarContext::new(c.forms.clone(), point.clone(), point).map_err(|e| e.to_string())?;
    let id = Pullback::identity(&c.forms);
    let mut inputs = 0;
    for s in -1..=2 {
        for t in -1..=2 {
            let mut w = vec![Scalar::zero(); c.forms.complex.degree_dim_h(-2)];
            w[0] = Scalar::new(q(0), q(s));
            let mut g = vec![Scalar::zero(); c.forms.complex.degree_dim_h(0)];
            g[1] = Scalar::one();
            let gw = FormGreenData { p: 1, omega: realify_vec(&w), g: realify_vec(&g) };
            let r = star_product(&sc, &gw, &c.scaled_class(&q(t)), &id).map_err(|e| e.to_string())?;
            ensure(omega_ambient(&r.context, &r.class) == r.omega_wedge, || format!("s={s} t={t}: slot"))?;
            ensure(r.closed, || format!("s={s} t={t}: not closed"))?;
            inputs += 1;
        }
    }
    Ok(format!("verdicts on 6 scales, {k} a-checks, {inputs} star inputs"))
}

fn point_complex_cross_check() -> Outcome {
    let mut saturated = 0;
    for e in 0..=2 {
        for n in 2..=4 {
            let r = formal_deligne_point_complex(e, n).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("e={e} N={n}: {:?}", r.rows))?;
            let s = r.rows.iter().filter(|x| x.saturated).count();
            ensure(s > 0, || format!("e={e} N={n}: nothing saturated"))?;
            saturated += s;
        }
    }
    Ok(format!("{saturated} saturated degrees"))
}

fn cli_determinism() -> Outcome {
    let cmds = suite_commands();
    for c in &cmds {
        let a = run(c.clone());
        let b = run(c.clone());
        ensure(a == b, || format!("{}: outputs differ", c.join(" ")))?;
        ensure(!a.stdout.is_empty(), || format!("{}: empty output ({})", c.join(" "), a.stderr))?;
    }
    Ok(format!("{} commands", cmds.len()))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome, Option<u64>)> = vec![
        ("dolbeault validity of the suite", dolbeault_validity, Some(1)),
        ("d_D squared vanishes", deligne_d_squared, Some(5)),
        ("homotopy certificate psi phi = id, phi psi - id = dh + hd", homotopy_certificate, Some(10)),
        ("degenerate ranges agree with the real complex", degenerate_ranges, None),
        ("Deligne functor is exact on jet sequences", functor_exactness, None),
        ("long exact sequences are exact with zero Euler characteristic", les_exactness, None),
        ("pairing sign tables, every regime hit", sign_tables, None),
        ("exceptional duality Gram matrices invertible", exceptional, None),
        ("Poincare map is an isomorphism", poincare, None),
        ("semipurity bound on the point family", semipurity, Some(30)),
        ("H^{0,0} of jet(N) grows as N+1", infinite_dimensionality, None),
        ("Green objects, omega after a, star omega slot", green_layer, None),
        ("truncated point complex matches Deligne homology", point_complex_cross_check, None),
        ("CLI output is deterministic", cli_determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        let r = r.and_then(|msg| within(t, limit.map(Duration::from_secs)).map(|_| msg));
        match r {
            Ok(msg) => println!("PASS {:>2} {name} ({msg}) [{:.2}s]", i + 1, t.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} [{:.2}s]", i + 1, t.as_secs_f64());
            }
        }
    }
    println!("{} of 14 criteria passed", 14 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
