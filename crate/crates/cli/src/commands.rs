use std::path::Path;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use twistrep::clifford::{block_theta_induce, correspond, extend_semisimple, hom_dim, Ambient, TwistContext};
use twistrep::group::check_star;
use twistrep::io::{self, group_file, rep_file};
use twistrep::linalg::{to_nested, C64};
use twistrep::par::Exec;
use twistrep::rep::{character_of, equivalent, induce, intertwiners, irreps, restrict, witness_residual, ClassFunction};
use twistrep::twisted::twist;
use twistrep::{iso, zoo, Error, FiniteGroup, MatrixRep, Subgroup};

use crate::input::{InputError, Loader};
use crate::report::Report;
use crate::{Command, Failure, RunConfig, Target, Triple};

type Outcome = Result<(), Failure>;

pub fn run(cmd: &Command, run: &RunConfig, loader: &mut Loader, report: &mut Report) -> Outcome {
    match cmd {
        Command::CheckGroup { group, identify } => check_group(group, *identify, loader, report),
        Command::Twist { group, character, action, identify, untwist, out } => {
            twist_cmd(group, character, action, *identify, *untwist, out.as_deref(), loader, report)
        }
        Command::Irreps { group, character, kernel, out } => {
            let target = Target { group: group.clone(), character: character.clone(), kernel: *kernel };
            irreps_cmd(&target, out.as_deref(), run, loader, report)
        }
        Command::Equiv { a, b, target } => equiv_cmd(a, b, target, run, loader, report),
        Command::Induce { rho, group, character, out } => {
            induce_cmd(rho, group, character, out.as_deref(), run, loader, report)
        }
        Command::Character { rho, target } => character_cmd(rho, target, run, loader, report),
        Command::CheckEquivariance { rho, triple } => equivariance_cmd(rho, triple, loader, report),
        Command::Extend { rho, triple, root, all, out } => {
            extend_cmd(rho, triple, *root, *all, out.as_deref(), run, loader, report)
        }
        Command::Correspond { triple } => correspond_cmd(triple, loader, report),
        Command::Fixtures { name, out } => fixtures_cmd(name, out, report),
    }
}

/// `[re, im]` with round-off below 1e-12 cleared, so reports stay stable.
fn cx(z: C64) -> [f64; 2] {
    let clean = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
    [clean(z.re), clean(z.im)]
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String, InputError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, io::to_json(value) + "\n").map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

fn class_labels(g: &FiniteGroup, cf: &ClassFunction) -> Vec<Vec<String>> {
    cf.classes.iter().map(|c| c.iter().map(|&x| g.label(x).to_string()).collect()).collect()
}

/// The group a `Target` names: the whole group or `ker χ`.
fn target_group(t: &Target, loader: &mut Loader) -> Result<Arc<FiniteGroup>, InputError> {
    let g = loader.group(&t.group)?;
    match &t.character {
        Some(path) => {
            let chi = loader.character(path, &g)?;
            if t.kernel {
                Ok(loader.kernel(&chi, &g, path)?.group().clone())
            } else {
                Ok(g)
            }
        }
        None => Ok(g),
    }
}

fn context(t: &Triple, loader: &mut Loader) -> Result<TwistContext, InputError> {
    let g = loader.group(&t.group)?;
    let chi = loader.character(&t.character, &g)?;
    let act = loader.action(&t.action, &g)?;
    let origin = format!("{} with {}", t.character.display(), t.action.display());
    let tw = twist(g, chi, act).map_err(|e| InputError(format!("{origin}: {e}")))?;
    TwistContext::new(tw).map_err(|e| InputError(format!("{origin}: {e}")))
}

fn check_group(path: &Path, identify: bool, loader: &mut Loader, report: &mut Report) -> Outcome {
    let (name, text) = loader.read(path)?;
    match io::load_group(&text, &name, loader.cap) {
        Ok(g) => {
            report.check("latin_square", true, 0.0);
            report.check("identity", true, 0.0);
            report.check("associative", true, 0.0);
            report.set("name", g.name());
            report.set("order", g.order());
            report.set("identity", g.identity());
            report.set("abelian", g.is_abelian());
            report.set("generators", g.generators());
            let classes = g.conjugacy_classes();
            report.set("class_sizes", classes.iter().map(Vec::len).collect::<Vec<_>>());
            report.set("element_orders", (0..g.order()).map(|x| g.element_order(x)).collect::<Vec<_>>());
            if identify {
                report.set("isomorphic_to", zoo::identify(&g));
            }
            Ok(())
        }
        Err(Error::NotLatinSquare(msg)) => {
            report.check("latin_square", false, 1.0);
            report.set("violation", msg);
            Ok(())
        }
        Err(Error::NotAssociative(a, b, c)) => {
            report.check("latin_square", true, 0.0);
            report.check("identity", true, 0.0);
            report.check("associative", false, 1.0);
            report.set("violation", [a, b, c]);
            Ok(())
        }
        Err(Error::Parse(msg)) => Err(InputError(msg).into()),
        Err(e) => Err(InputError(format!("{name}: {e}")).into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn twist_cmd(
    group: &Path,
    character: &Path,
    action: &Path,
    identify: bool,
    untwist: bool,
    out: Option<&Path>,
    loader: &mut Loader,
    report: &mut Report,
) -> Outcome {
    let g = loader.group(group)?;
    let chi = loader.character(character, &g)?;
    let act = loader.action(action, &g)?;
    let tw = match twist(g.clone(), chi, act) {
        Ok(tw) => tw,
        Err(Error::StarFails { element, k }) => {
            report.check("star", false, 1.0);
            report.set("violation", json!({ "element": element, "k": k }));
            return Ok(());
        }
        Err(e) => return Err(InputError(format!("{} with {}: {e}", character.display(), action.display())).into()),
    };
    let verification = tw.report();
    report.check("star", verification.star, 0.0);
    report.check("associative", verification.associative, 0.0);
    report.check("alpha_character", verification.alpha_character, 0.0);
    report.check("k_normal", verification.k_normal, 0.0);
    report.check("action_descends", verification.action_descends, 0.0);
    let h = tw.group();
    let file = group_file(h);
    report.set("verification", &verification);
    report.set("order", h.order());
    report.set("table_unchanged", h.flat_table() == g.flat_table());
    if identify {
        report.set("isomorphic_to", zoo::identify(h));
        report.set("base_isomorphic_to", zoo::identify(&g));
    }
    if untwist {
        // Exploratory only: no check depends on the outcome.
        let back = twist(h.clone(), tw.alpha_character().inverse(), tw.descend_action());
        let value = match back {
            Ok(b) => json!({
                "table_equal": b.group().flat_table() == g.flat_table(),
                "isomorphic": iso::is_isomorphic(b.group(), &g),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        };
        report.set("untwist", value);
    }
    if let Some(path) = out {
        report.set("written", write_json(path, &file)?);
    }
    report.set("group", &file);
    Ok(())
}

fn irreps_cmd(t: &Target, out: Option<&Path>, run: &RunConfig, loader: &mut Loader, report: &mut Report) -> Outcome {
    let g = target_group(t, loader)?;
    let cfg = &loader.cfg;
    let reps = irreps(&g, cfg)?;
    let chars: Vec<ClassFunction> = reps.iter().map(character_of).collect();
    let dims: Vec<usize> = reps.iter().map(MatrixRep::dim).collect();
    let square_sum: usize = dims.iter().map(|d| d * d).sum();
    report.check("dimension_squares", square_sum == g.order(), square_sum.abs_diff(g.order()) as f64);
    let class_count = g.conjugacy_classes().len();
    report.check("class_count", reps.len() == class_count, reps.len().abs_diff(class_count) as f64);
    let mut orth = 0.0f64;
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            orth = orth.max((a.inner(b) - C64::new(expect, 0.0)).norm());
        }
    }
    report.bound("orthogonality", orth, run.tol);
    let hom = reps.iter().map(|r| r.homomorphism_residual(Exec::default()).0).fold(0.0, f64::max);
    report.bound("homomorphism", hom, run.tol);
    let unit = reps.iter().map(MatrixRep::unitary_residual).fold(0.0, f64::max);
    report.bound("unitary", unit, run.tol);

    report.set("group", g.name());
    report.set("order", g.order());
    report.set("count", reps.len());
    report.set("dims", &dims);
    if let Some(first) = chars.first() {
        report.set("classes", class_labels(&g, first));
    }
    let table: Vec<Vec<[f64; 2]>> = chars.iter().map(|c| c.values.iter().map(|&z| cx(z)).collect()).collect();
    report.set("characters", table);
    if let Some(dir) = out {
        let written = reps
            .iter()
            .enumerate()
            .map(|(i, r)| write_json(&dir.join(format!("irrep_{i}.json")), &rep_file(r)))
            .collect::<Result<Vec<_>, _>>()?;
        report.set("written", written);
    }
    report.set("reps", reps.iter().map(rep_file).collect::<Vec<_>>());
    Ok(())
}

fn equiv_cmd(a: &Path, b: &Path, t: &Target, run: &RunConfig, loader: &mut Loader, report: &mut Report) -> Outcome {
    let g = target_group(t, loader)?;
    let ra = loader.rep(a, &g)?;
    let rb = loader.rep(b, &g)?;
    let cfg = &loader.cfg;
    report.set("dims", [ra.dim(), rb.dim()]);
    let space = intertwiners(&ra, &rb, cfg)?;
    report.set("intertwiner_dim", space.dim());
    match equivalent(&ra, &rb, cfg)? {
        Some(w) => {
            let res = witness_residual(&ra, &rb, &w);
            report.bound("equivalent", res, run.tol);
            report.set("equivalent", true);
            report.set("witness", to_nested(&twistrep::linalg::tidy(&w, 1e-12)));
        }
        None => {
            report.check("equivalent", false, f64::INFINITY);
            report.set("equivalent", false);
        }
    }
    Ok(())
}

fn induce_cmd(
    rho: &[std::path::PathBuf],
    group: &Path,
    character: &Path,
    out: Option<&Path>,
    run: &RunConfig,
    loader: &mut Loader,
    report: &mut Report,
) -> Outcome {
    let g = loader.group(group)?;
    let chi = loader.character(character, &g)?;
    let k = loader.kernel(&chi, &g, character)?;
    let r = loader.rep_sum(rho, k.group())?;
    let cfg = loader.cfg.clone();
    let ind = induce(&r, &k)?;
    let hom = ind.homomorphism_residual(Exec::default()).0;
    report.bound("homomorphism", hom, run.tol);
    report.check("dimension", ind.dim() == k.index() * r.dim(), ind.dim().abs_diff(k.index() * r.dim()) as f64);
    let sigmas = irreps(&g, &cfg)?;
    let mut mismatches = 0usize;
    let mut multiplicities = Vec::new();
    for sigma in &sigmas {
        let up = hom_dim(&ind, sigma, &cfg)?;
        let down = hom_dim(&r, &restrict(sigma, &k)?, &cfg)?;
        mismatches += usize::from(up != down);
        multiplicities.push(up);
    }
    report.check("frobenius_reciprocity", mismatches == 0, mismatches as f64);
    if let Ok(amb) = Ambient::plain(&k) {
        let theta = block_theta_induce(&r, &amb)?;
        match equivalent(&theta, &ind, &cfg)? {
            Some(w) => report.bound("block_theta_equivalent", witness_residual(&theta, &ind, &w), run.tol),
            None => report.check("block_theta_equivalent", false, f64::INFINITY),
        }
    }
    report.set("index", k.index());
    report.set("dim", ind.dim());
    report.set("irrep_dims", sigmas.iter().map(MatrixRep::dim).collect::<Vec<_>>());
    report.set("multiplicities", multiplicities);
    let file = rep_file(&ind);
    if let Some(path) = out {
        report.set("written", write_json(path, &file)?);
    }
    report.set("rep", file);
    Ok(())
}

fn character_cmd(rho: &Path, t: &Target, run: &RunConfig, loader: &mut Loader, report: &mut Report) -> Outcome {
    let g = target_group(t, loader)?;
    let r = loader.rep(rho, &g)?;
    let cfg = loader.cfg.clone();
    let cf = character_of(&r);
    report.bound("homomorphism", r.homomorphism_residual(Exec::default()).0, run.tol);
    report.bound("class_function", cf.spread, run.tol * (r.dim().max(1) as f64));
    let norm = cf.inner(&cf);
    let mut worst = 0.0f64;
    let mut multiplicities = Vec::new();
    for sigma in irreps(&g, &cfg)? {
        let m = cf.inner(&character_of(&sigma));
        let rounded = m.re.round();
        worst = worst.max((m - C64::new(rounded, 0.0)).norm());
        multiplicities.push(rounded as i64);
    }
    report.bound("integral_multiplicities", worst, run.tol.sqrt());
    report.set("dim", r.dim());
    report.set("classes", class_labels(&g, &cf));
    report.set("values", cf.values.iter().map(|&z| cx(z)).collect::<Vec<_>>());
    report.set("norm", cx(norm));
    report.set("irreducible", (norm - C64::new(1.0, 0.0)).norm() < run.tol.sqrt());
    report.set("multiplicities", multiplicities);
    Ok(())
}

fn kernel_rep(rho: &[std::path::PathBuf], ctx: &TwistContext, loader: &mut Loader) -> Result<MatrixRep, InputError> {
    let k: &Subgroup = ctx.kernel();
    loader.rep_sum(rho, k.group())
}

fn equivariance_cmd(rho: &[std::path::PathBuf], t: &Triple, loader: &mut Loader, report: &mut Report) -> Outcome {
    let ctx = context(t, loader)?;
    let r = kernel_rep(rho, &ctx, loader)?;
    let eq = ctx.satisfies_equivariance(&r, &loader.cfg)?;
    for v in &eq.verdicts {
        report.check(format!("gamma_{}", v.gamma), v.equivalent, v.residual);
    }
    report.set("gamma_order", eq.verdicts.len());
    report.set("generator_holds", eq.generator_holds);
    report.set("holds", eq.holds);
    report.set("report", &eq);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extend_cmd(
    rho: &[std::path::PathBuf],
    t: &Triple,
    root: usize,
    all: bool,
    out: Option<&Path>,
    run: &RunConfig,
    loader: &mut Loader,
    report: &mut Report,
) -> Outcome {
    let ctx = context(t, loader)?;
    let r = kernel_rep(rho, &ctx, loader)?;
    let cfg = loader.cfg.clone();
    let amb = ctx.ambient();
    if root >= amb.n() {
        return Err(InputError(format!("--root {root} must be below {}", amb.n())).into());
    }
    let eq = ctx.satisfies_equivariance(&r, &cfg)?;
    report.check("equivariant", eq.holds, eq.max_residual());
    if !eq.holds {
        report.set("equivariance", &eq);
        return Ok(());
    }
    let sx = extend_semisimple(&r, amb, &cfg)?;
    let choices: Vec<Vec<usize>> = sx.orbits.iter().map(|o| vec![root; o.multiplicity]).collect();
    let ext = sx.assemble(&choices, &cfg)?;
    let res = &ext.residuals;
    report.bound("homomorphism", res.homomorphism, run.tol);
    report.bound("power", res.power, run.tol);
    report.bound("restriction", res.restriction, run.tol);
    report.bound("schur", res.schur, run.tol);
    report.bound("traces", res.traces, 10.0 * run.tol);
    let (back, _) = ctx.from_gchi_rep(&ext.rep, &cfg)?;
    report.bound("round_trip", back.max_diff(&r), run.tol);

    report.set("n", ext.n);
    report.set("lift", ext.lift);
    report.set("branch", ext.branch);
    report.set("root", ext.root);
    report.set("lambda", cx(ext.lambda));
    report.set("block_lambdas", ext.block_lambdas.iter().map(|&z| cx(z)).collect::<Vec<_>>());
    report.set("mu", cx(ext.mu));
    report.set("t", to_nested(&twistrep::linalg::tidy(&ext.t, 1e-12)));
    report.set("residuals", res);
    report.set(
        "orbits",
        sx.orbits.iter().map(|o| json!({ "size": o.members.len(), "multiplicity": o.multiplicity })).collect::<Vec<_>>(),
    );
    if all {
        let exts = sx.all_extensions(&cfg)?;
        let mut reps: Vec<&MatrixRep> = Vec::new();
        for e in &exts {
            let mut fresh = true;
            for seen in &reps {
                if equivalent(seen, &e.rep, &cfg)?.is_some() {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push(&e.rep);
            }
        }
        let worst = exts.iter().map(|e| e.residuals.homomorphism).fold(0.0, f64::max);
        report.bound("all_homomorphism", worst, run.tol);
        report.set("extensions", exts.len());
        report.set("equivalence_classes", reps.len());
    }
    let file = rep_file(&ext.rep);
    if let Some(path) = out {
        report.set("written", write_json(path, &file)?);
    }
    report.set("rep", file);
    Ok(())
}

fn correspond_cmd(t: &Triple, loader: &mut Loader, report: &mut Report) -> Outcome {
    let ctx = context(t, loader)?;
    let c = correspond(&ctx, &loader.cfg)?;
    for check in &c.checks {
        report.check(check.name.clone(), check.pass, check.residual);
    }
    if let serde_json::Value::Object(map) = serde_json::to_value(&c).expect("serializable") {
        for (key, value) in map {
            if key != "checks" && key != "pass" {
                report.data.insert(key, value);
            }
        }
    }
    Ok(())
}

fn fixtures_cmd(name: &str, out: &Path, report: &mut Report) -> Outcome {
    let f = zoo::fixture(name).map_err(|e| InputError(e.to_string()))?;
    let mut written = vec![write_json(&out.join("group.json"), &group_file(&f.group))?];
    if let Some(chi) = &f.character {
        written.push(write_json(&out.join("character.json"), &io::character_file(chi))?);
    }
    if let Some(act) = &f.action {
        written.push(write_json(&out.join("action.json"), &io::action_file(act))?);
    }
    if let (Some(chi), Some(act)) = (&f.character, &f.action) {
        report.check("star", check_star(chi, act)?, 0.0);
    }
    for (label, rep) in &f.kernel_reps {
        written.push(write_json(&out.join(format!("{label}.json")), &rep_file(rep))?);
    }
    report.check("files_written", true, 0.0);
    report.set("fixture", &f.name);
    report.set("group", f.group.name());
    report.set("written", written);
    Ok(())
}
