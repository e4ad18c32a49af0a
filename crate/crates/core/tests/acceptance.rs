use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twistrep::clifford::{block_theta_induce, correspond, extend_orbit_block, Ambient, TwistContext};
use twistrep::group::{check_latin, find_associativity_violation, kernel, validate_action};
use twistrep::iso::find_isomorphism;
use twistrep::linalg::{pow, rel_diff};
use twistrep::par::Exec;
use twistrep::rep::{character_of, equivalent, induce, intertwiners, irreducible, irreps, restrict, MatrixRep, NumConfig};
use twistrep::twisted::{triple_expansion, twist, twisted_table, TwistedGroup};
use twistrep::zoo::{self, Triple};
use twistrep::{Character, CyclicAction, FiniteGroup};

type Outcome = Result<String, String>;
/// Name, body and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

const TOL: f64 = 1e-8;
const SEED: u64 = 20240611;

fn cfg() -> NumConfig {
    NumConfig::default().with_tol(TOL)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture_triple(name: &str) -> (Arc<FiniteGroup>, Character, CyclicAction) {
    let f = zoo::fixture(name).expect("fixture");
    (f.group, f.character.expect("character"), f.action.expect("action"))
}

fn random_triples(seed: u64, count: usize) -> Vec<Triple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| zoo::random_triple(&mut rng, 24)).collect()
}

fn twisted_of(g: &Arc<FiniteGroup>, chi: &Character, act: &CyclicAction) -> Result<TwistedGroup, String> {
    twist(g.clone(), chi.clone(), act.clone()).map_err(|e| format!("{}: {e}", g.name()))
}

fn criterion_1() -> Outcome {
    let mut inputs: Vec<(Arc<FiniteGroup>, Character, CyclicAction)> = vec![fixture_triple("A"), fixture_triple("B")];
    inputs.extend(random_triples(SEED, 50).into_iter().map(|t| (t.group, t.character, t.action)));
    let mut nontrivial = 0;
    for (g, chi, act) in &inputs {
        let n = g.order();
        // Table computed straight from the definition, checked independently of the constructor.
        let table = twisted_table(g, chi, act, Exec::Sequential);
        check_latin(&table, n).map_err(|e| format!("{}: {e}", g.name()))?;
        ensure(find_associativity_violation(&table, n, Exec::Sequential).is_none(), || format!("{}: not associative", g.name()))?;
        let t = twisted_of(g, chi, act)?;
        ensure(t.group().flat_table() == table.as_slice(), || "constructor table differs".into())?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let e = triple_expansion(&t, a, b, c);
                    ensure(t.star(a, t.star(b, c)) == e && t.star(t.star(a, b), c) == e, || "expansion differs".into())?;
                }
            }
        }
        ensure(chi.check_on(t.group()).is_ok(), || format!("{}: α_χ is not a character", g.name()))?;
        ensure(t.kernel_twisted().is_normal(), || format!("{}: K not normal in G_χ", g.name()))?;
        ensure(validate_action(act, t.group()).is_valid(), || format!("{}: action does not descend", g.name()))?;
        ensure(
            act.auts().iter().all(|p| t.kernel_base().members().iter().all(|&k| t.kernel_base().contains(p[k]))),
            || "action does not preserve K".into(),
        )?;
        if !act.is_trivial() {
            nontrivial += 1;
        }
    }
    Ok(format!("{} triples ({} with non-trivial action)", inputs.len(), nontrivial))
}

fn criterion_2() -> Outcome {
    let (g, chi, act) = fixture_triple("B");
    let t = twisted_of(&g, &chi, &act)?;
    let v4 = zoo::klein4();
    let iso = find_isomorphism(t.group(), &v4).ok_or("G_χ is not isomorphic to V4")?;
    // brute-force table comparison through the found bijection
    for a in 0..4 {
        for b in 0..4 {
            ensure(iso[t.star(a, b)] == v4.mul(iso[a], iso[b]), || "bijection is not a homomorphism".into())?;
        }
    }
    ensure(find_isomorphism(t.group(), &zoo::cyclic(4)).is_none(), || "G_χ ≅ C4".into())?;
    ensure((1..4).all(|x| t.group().element_order(x) == 2), || "element of ∗-order ≠ 2".into())?;
    Ok(format!("isomorphism {iso:?}"))
}

fn criterion_3() -> Outcome {
    let f = zoo::fixture("C").map_err(|e| e.to_string())?;
    let cfg = cfg();
    let (g, chi, act) = fixture_triple("C");
    let ctx = TwistContext::new(twisted_of(&g, &chi, &act)?).map_err(|e| e.to_string())?;
    let amb = ctx.ambient();
    let get = |name: &str| f.kernel_reps.iter().find(|(n, _)| n == name).map(|(_, r)| r.clone()).unwrap();
    let (w, wb) = (get("rho_omega"), get("rho_omega_bar"));
    let ext = extend_orbit_block(&[w.clone(), wb], amb, 0, &cfg).map_err(|e| e.to_string())?;

    let k = kernel(&chi, &g).map_err(|e| e.to_string())?;
    let ind = induce(&w, &k).map_err(|e| e.to_string())?;
    let t_ind = equivalent(&ext.rep, &ind, &cfg).map_err(|e| e.to_string())?.ok_or("extension ≇ Ind ρ_ω")?;
    let s3 = irreps(&g, &cfg).map_err(|e| e.to_string())?;
    let standard = s3.iter().find(|r| r.dim() == 2).ok_or("no 2-dim irrep of S3")?;
    let t_std = equivalent(&ext.rep, standard, &cfg).map_err(|e| e.to_string())?.ok_or("extension ≇ 2-dim irrep")?;
    let residual = [
        ext.residuals.homomorphism,
        ext.residuals.power,
        ext.residuals.schur,
        twistrep::rep::witness_residual(&ext.rep, &ind, &t_ind),
        twistrep::rep::witness_residual(&ext.rep, standard, &t_std),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    ensure(residual < TOL, || format!("residual {residual:.2e}"))?;

    // The extensions produced by the n = 2 root choices.
    let all = ext.all_roots(amb, &cfg).map_err(|e| e.to_string())?;
    ensure(all.len() == 2, || format!("{} extensions", all.len()))?;
    ensure(!all[0].rep.same_matrices(&all[1].rep), || "root choices coincide".into())?;
    let sign = zoo::sign_character(&g);
    let mut twist_residual: f64 = 0.0;
    for h in 0..g.order() {
        let expect = all[0].rep.image(h) * sign.value(h);
        twist_residual = twist_residual.max(rel_diff(all[1].rep.image(h), &expect));
    }
    ensure(twist_residual < TOL, || format!("extensions differ by more than sign: {twist_residual:.2e}"))?;
    for e in &all {
        for (local, &m) in k.members().iter().enumerate() {
            ensure(e.rep.image(m) == e.restricted.image(local), || "restriction is not exact".into())?;
        }
    }
    let classes = if equivalent(&all[0].rep, &all[1].rep, &cfg).map_err(|e| e.to_string())?.is_some() { 1 } else { 2 };
    Ok(format!(
        "max residual {residual:.1e}; 2 extensions ρ̃, sign·ρ̃ (|diff| {twist_residual:.1e}); equivalence classes among them: {classes}"
    ))
}

fn criterion_4() -> Outcome {
    let cfg = cfg();
    let mut inputs: Vec<(String, Arc<FiniteGroup>, Character, CyclicAction)> = ["A", "B", "C"]
        .iter()
        .map(|n| {
            let (g, c, a) = fixture_triple(n);
            (format!("fixture {n}"), g, c, a)
        })
        .collect();
    for t in random_triples(SEED ^ 4, 10) {
        inputs.push((t.group.name().to_string(), t.group, t.character, t.action));
    }
    let mut total_irreps = 0;
    for (label, g, chi, act) in &inputs {
        let ctx = TwistContext::new(twisted_of(g, chi, act)?).map_err(|e| format!("{label}: {e}"))?;
        let report = correspond(&ctx, &cfg).map_err(|e| format!("{label}: {e}"))?;
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        ensure(report.pass, || format!("{label}: failed {failed:?}"))?;
        ensure(report.orbits.iter().all(|o| o.extensions == report.gamma_order), || format!("{label}: count ≠ |Γ|"))?;
        ensure(report.orbits.iter().all(|o| o.equivariant), || format!("{label}: orbit class not equivariant"))?;
        total_irreps += report.gchi_irreps;
    }
    Ok(format!("{} inputs, {} irreps of G_χ matched", inputs.len(), total_irreps))
}

fn criterion_5() -> Outcome {
    let cfg = cfg();
    let groups = [zoo::cyclic(4), zoo::klein4(), zoo::symmetric3(), zoo::dihedral(4)];
    let mut summary = Vec::new();
    for g in groups {
        let g = Arc::new(g);
        let reps = irreps(&g, &cfg).map_err(|e| e.to_string())?;
        let sum: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
        ensure(sum == g.order(), || format!("{}: Σd² = {sum}", g.name()))?;
        ensure(reps.len() == g.conjugacy_classes().len(), || format!("{}: incomplete", g.name()))?;
        let chars: Vec<_> = reps.iter().map(character_of).collect();
        let mut worst: f64 = 0.0;
        for (i, a) in chars.iter().enumerate() {
            for (j, b) in chars.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - expect).norm());
            }
        }
        ensure(worst < 1e-7, || format!("{}: orthogonality off by {worst:.2e}", g.name()))?;
        for r in &reps {
            ensure(irreducible(r, &cfg).unwrap_or(false), || "reducible output".into())?;
        }
        summary.push(format!("{}{:?}", g.name(), reps.iter().map(MatrixRep::dim).collect::<Vec<_>>()));
    }
    let s3 = Arc::new(zoo::symmetric3());
    let a3 = kernel(&zoo::sign_character(&s3), &s3).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for rho in irreps(a3.group(), &cfg).map_err(|e| e.to_string())? {
        let ind = induce(&rho, &a3).map_err(|e| e.to_string())?;
        for sigma in irreps(&s3, &cfg).map_err(|e| e.to_string())? {
            let res = restrict(&sigma, &a3).map_err(|e| e.to_string())?;
            let lhs = intertwiners(&ind, &sigma, &cfg).map_err(|e| e.to_string())?.dim();
            let rhs = intertwiners(&rho, &res, &cfg).map_err(|e| e.to_string())?.dim();
            ensure(lhs == rhs, || format!("reciprocity {lhs} ≠ {rhs}"))?;
            pairs += 1;
        }
    }
    Ok(format!("{}; reciprocity on {pairs} A3/S3 pairs", summary.join(" ")))
}

/// Inputs for the invariant suite: the fixtures with a non-trivial quotient,
/// then random triples drawn from a seed.
fn invariant_inputs(seed: u64) -> Result<TwistContext, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = match seed % 8 {
        0 => {
            let (g, c, a) = fixture_triple("B");
            Triple { group: g, character: c, action: a }
        }
        1 => {
            let (g, c, a) = fixture_triple("C");
            Triple { group: g, character: c, action: a }
        }
        _ => zoo::random_triple(&mut rng, 24),
    };
    TwistContext::new(twisted_of(&t.group, &t.character, &t.action)?).map_err(|e| e.to_string())
}

fn check_invariants(ctx: &TwistContext, cfg: &NumConfig) -> Result<usize, String> {
    let err = |e: twistrep::Error| e.to_string();
    let k = ctx.kernel();
    let q = ctx.base_quotient();
    let k_irreps = irreps(k.group(), cfg).map_err(err)?;
    let mut checks = 0;

    // lift independence
    for r in &k_irreps {
        for c in 0..q.gamma().order() {
            let canonical = ctx.gamma_inner(r, c).map_err(err)?;
            for lift in q.coset(c) {
                let other = twistrep::clifford::gamma_inner_with_lift(r, k, lift).map_err(err)?;
                ensure(equivalent(&canonical, &other, cfg).map_err(err)?.is_some(), || "lift dependence".into())?;
                checks += 1;
            }
        }
    }
    // generator sufficiency, on irreducibles and on orbit-style sums
    let mut candidates = k_irreps.clone();
    for (i, a) in k_irreps.iter().enumerate().take(4) {
        for b in k_irreps.iter().skip(i + 1).take(3) {
            candidates.push(twistrep::rep::direct_sum(a, b).map_err(err)?);
        }
    }
    for r in &candidates {
        let report = ctx.satisfies_equivariance(r, cfg).map_err(err)?;
        ensure(report.generator_holds == report.holds, || "generator check disagrees with all-γ check".into())?;
        checks += 1;
    }
    // round trip, power contract
    let amb = ctx.ambient();
    let gn = k.local_index(amb.lift_power_n()).expect("gⁿ ∈ K");
    for rep in irreps(ctx.twisted().group(), cfg).map_err(err)? {
        let (res, report) = ctx.from_gchi_rep(&rep, cfg).map_err(err)?;
        ensure(report.holds, || "restriction not equivariant".into())?;
        let ext = ctx.to_gchi_rep(&res, cfg).map_err(err)?;
        for (local, &m) in k.members().iter().enumerate() {
            ensure(ext.rep.image(m) == res.image(local), || "ρ̃|_K ≠ ρ".into())?;
        }
        let (res2, _) = ctx.from_gchi_rep(&ext.rep, cfg).map_err(err)?;
        ensure(res2.same_matrices(&res), || "round trip changed ρ".into())?;
        let power = rel_diff(&pow(&ext.t, amb.n()), res.image(gn));
        ensure(power < TOL, || format!("Tⁿ ≠ ρ(gⁿ): {power:.2e}"))?;
        // the canonical extension of Res ρ̃ is ρ̃ up to a character of Γ
        let mut matched = false;
        for r in 0..amb.n() {
            let values: Vec<_> = (0..rep.group().order())
                .map(|h| twistrep::linalg::root_of_unity((r * amb.split(h).0) as i64, amb.n() as u32))
                .collect();
            matched |= equivalent(&ext.rep, &rep.twist(&values), cfg).map_err(err)?.is_some();
        }
        ensure(matched, || "extension is not a Γ-twist of the source irrep".into())?;
        checks += 1;
    }
    // block Θ against function-space induction, in G
    let base = ctx.twisted().base();
    let kb = kernel(ctx.twisted().chi(), base).map_err(err)?;
    let plain = Ambient::plain(&kb).map_err(err)?;
    for r in &k_irreps {
        let theta = block_theta_induce(r, &plain).map_err(err)?;
        let ind = induce(r, &kb).map_err(err)?;
        ensure(theta.dim() == ind.dim(), || "Θ dimension".into())?;
        ensure(theta.homomorphism_residual(cfg.exec).0 < TOL, || "Θ is not a homomorphism".into())?;
        ensure(equivalent(&theta, &ind, cfg).map_err(err)?.is_some(), || "Θ ≇ Ind".into())?;
        checks += 1;
    }
    Ok(checks)
}

fn criterion_6() -> Outcome {
    let cfg = cfg();
    let mut runner = TestRunner::new_with_rng(
        Config { cases: 24, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &SEED.to_le_bytes().repeat(4)),
    );
    let checks = std::cell::Cell::new(0usize);
    // the first two seeds hit the fixtures
    for seed in [0u64, 1] {
        let ctx = invariant_inputs(seed)?;
        checks.set(checks.get() + check_invariants(&ctx, &cfg)?);
    }
    runner
        .run(&(2u64..u64::MAX), |seed| {
            let seed = seed | 2;
            let ctx = invariant_inputs(seed).map_err(TestCaseError::fail)?;
            let n = check_invariants(&ctx, &cfg).map_err(TestCaseError::fail)?;
            checks.set(checks.get() + n);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{} property checks over fixtures B, C and 24 random inputs", checks.get()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("twisted-group axioms", criterion_1, 5),
        ("fixture B is the Klein four group", criterion_2, 1),
        ("orbit-block extension on fixture C", criterion_3, 1),
        ("correspondence", criterion_4, 60),
        ("representation infrastructure", criterion_5, 5),
        ("invariant suite", criterion_6, 30),
    ];
    let mut failures = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let (status, detail) = match (&outcome, in_time) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over the {limit} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {} ({name}) in {:.3} s (limit {limit} s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
