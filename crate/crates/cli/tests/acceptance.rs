//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use bvdef::action::{check_invariance, symmetric_generators};
use bvdef::corpus::{corpus, CorpusConfig};
use bvdef::laws::{
    connective_laws, constant_function_laws, equality_laws, equivariance_checks, quantifier_laws, tautology_laws,
    translation_laws, LawReport,
};
use bvdef::models::enumerate_models;
use bvdef::predicates::{
    atom_decomposition, check_extensionality, invariant_atoms, predicate_from_formula, union_of_atoms, Predicate,
};
use bvdef::space::{conservativity_report, ClopenSet, Mode, Space};
use bvdef::syntax::{parse_formula, x_vars, y_vars, Formula, Theory};
use bvdef::synthesis::{
    check_transport, element_classes, eta_cover, factors_through_elements, local_formula, synthesize_definition,
    verify_definition,
};
use bvdef_oracle as oracle;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn theories() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../theories")
}

fn build(file: &str, max_size: usize, k: usize, mode: Mode) -> Space {
    let theory = Theory::load(theories().join(file)).expect("theory file");
    Space::build(enumerate_models(&theory, max_size).expect("models"), k, mode).expect("space")
}

fn e1(mode: Mode) -> Space {
    build("unary.fol", 2, 4, mode)
}

fn graphs() -> Space {
    build("graphs.fol", 3, 12, Mode::Balanced)
}

fn pointed_map() -> Space {
    build("pointed_map.fol", 2, 4, Mode::Balanced)
}

fn parse(space: &Space, text: &str) -> Formula {
    parse_formula(text, space.class().signature()).expect("formula")
}

fn unary_oracle() -> Vec<oracle::Labelled> {
    oracle::iso_classes(&[1], 2, |_| true)
}

fn oracle_atom_count(arity: usize) -> usize {
    let models = unary_oracle();
    let points = oracle::points(&models, 4, true);
    oracle::atom_count(&models, &points, 4, arity)
}

fn space_construction() -> Outcome {
    let models = unary_oracle();
    let pts = oracle::points(&models, 4, true);
    let r0 = pts.iter().filter(|p| models[p.model].holds(0, &[p.alpha[0]])).count();
    let eq01 = pts.iter().filter(|p| p.alpha[0] == p.alpha[1]).count();
    let some_r = pts.iter().filter(|p| (0..models[p.model].size).any(|a| models[p.model].holds(0, &[a]))).count();
    let expected = (5, 14, 7, 6, 10);
    ensure((models.len(), pts.len(), r0, eq01, some_r) == expected, || {
        format!("oracle gives {:?}", (models.len(), pts.len(), r0, eq01, some_r))
    })?;

    let s = e1(Mode::Balanced);
    let size = |text: &str, xi: &[usize]| s.evaluate_bound(&parse(&s, text), &x_vars(xi.len()), xi).unwrap().len();
    let got = (s.models().len(), s.len(), size("r(x1)", &[0]), size("x1 = x2", &[0, 1]), size("ex x r(x)", &[]));
    ensure(got == expected, || format!("library gives {got:?}, oracle {expected:?}"))?;
    Ok("5 models, 14 points, |r(x1)@0| = 7, |x1=x2@(0,1)| = 6, |ex x r(x)| = 10 (oracle and library)".into())
}

fn all_pass(reports: &[LawReport]) -> Result<usize, String> {
    for r in reports {
        ensure(r.passed(), || r.to_string())?;
    }
    Ok(reports.iter().map(|r| r.checks).sum())
}

fn law_suite() -> Outcome {
    let mut total = 0;
    let mut corpus_size = 0;
    let e1_bindings: Vec<Vec<usize>> = (0..16).map(|c| vec![c / 4, c % 4]).collect();
    let configs = [
        ("E1", e1(Mode::Balanced), e1_bindings.clone()),
        ("graphs", graphs(), vec![vec![0, 1], vec![5, 5], vec![11, 3]]),
        ("function/constant", pointed_map(), e1_bindings),
    ];
    for (i, (name, s, bindings)) in configs.iter().enumerate() {
        let fs = corpus(s.class().signature(), &CorpusConfig::new(x_vars(2)), 200, 100 + i as u64);
        ensure(fs.iter().all(|f| f.quantifier_depth() <= 2), || format!("{name}: corpus depth"))?;
        corpus_size = fs.len();
        let reports = [
            connective_laws(s, &fs, bindings).unwrap(),
            quantifier_laws(s, &fs, bindings).unwrap(),
            tautology_laws(s, &fs, bindings).unwrap(),
            equality_laws(s).unwrap(),
            constant_function_laws(s).unwrap(),
            translation_laws(s, &fs, bindings).unwrap(),
        ];
        if *name == "function/constant" {
            ensure(reports[4].checks > 0, || "no constant/function laws were checked".into())?;
        }
        total += all_pass(&reports).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!(
        "{total} exact checks over {corpus_size}-formula corpora on E1, graphs and a function/constant signature"
    ))
}

fn equivariance() -> Outcome {
    let mut detail = Vec::new();
    for (name, s, seed) in [("E1", e1(Mode::Balanced), 1), ("graphs", graphs(), 2)] {
        let fs = corpus(s.class().signature(), &CorpusConfig::new(x_vars(2)), 200, 200 + seed);
        let r = equivariance_checks(&s, &fs, 2, 100, seed).unwrap();
        ensure(r.passed() && r.checks == 100, || format!("{name}: {r}"))?;
        detail.push(format!("{name} 100/100"));
    }
    Ok(detail.join(", "))
}

fn conservativity() -> Outcome {
    let s = e1(Mode::Balanced);
    let text = std::fs::read_to_string(theories().join("unary_battery.txt")).unwrap();
    let sentences: Vec<Formula> = text
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse(&s, l))
        .collect();
    ensure(sentences.len() == 10, || format!("battery has {} sentences", sentences.len()))?;
    let report = conservativity_report(&s, &sentences).unwrap();
    let valid = report.entries.iter().filter(|e| e.holds_in_all_models).count();
    ensure(report.all_agree(), || format!("disagreements: {:?}", report.defects().collect::<Vec<_>>()))?;
    Ok(format!("10/10 agree ({valid} valid, {} not)", 10 - valid))
}

fn soundness() -> Outcome {
    let mut checked = 0;
    for (s, arity) in [(e1(Mode::Balanced), 1), (e1(Mode::Balanced), 2), (e1(Mode::Unbalanced), 1), (graphs(), 1)] {
        let gens = symmetric_generators(s.k()).unwrap();
        for phi in corpus(s.class().signature(), &CorpusConfig::new(y_vars(arity)), 100, 300 + arity as u64) {
            let p = predicate_from_formula(&s, &phi, arity).unwrap();
            let inv = check_invariance(&s, &p, &gens).unwrap();
            ensure(inv.invariant, || format!("`{phi}`: {:?}", inv.violation))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} corpus predicates invariant (E1 arity 1 and 2, E1 unbalanced, graphs)"))
}

fn all_unions(s: &Space, arity: usize) -> Vec<Predicate> {
    let atoms = invariant_atoms(s, arity).unwrap();
    (0u64..1 << atoms.len())
        .map(|mask| {
            let sel: Vec<usize> = (0..atoms.len()).filter(|i| mask >> i & 1 == 1).collect();
            union_of_atoms(s, arity, &atoms, &sel).unwrap()
        })
        .collect()
}

fn completeness() -> Outcome {
    let s = e1(Mode::Balanced);
    let mut detail = Vec::new();
    for arity in [1, 2] {
        let expected = oracle_atom_count(arity);
        let atoms = invariant_atoms(&s, arity).unwrap().len();
        ensure(atoms == expected, || format!("arity {arity}: {atoms} atoms, oracle {expected}"))?;
        let preds = all_unions(&s, arity);
        let mut verified = 0;
        for p in &preds {
            let r = synthesize_definition(&s, p).unwrap();
            ensure(r.verified, || format!("arity {arity}: not verified, ψ = {}", r.psi))?;
            verified += 1;
        }
        detail.push(format!("arity {arity}: {atoms} atoms, {verified}/{} verified", preds.len()));
    }
    Ok(detail.join("; "))
}

fn local_and_cover_checks(s: &Space, p: &Predicate) -> Result<usize, String> {
    let mut n = 0;
    for r in 0..p.tuple_count() {
        let eta0 = p.tuple(r);
        let target = p.get(&eta0);
        for x in 0..s.len() {
            let u = if target.contains(x) { target.clone() } else { target.complement() };
            let d = local_formula(s, x, &eta0, &u).map_err(|e| e.to_string())?;
            ensure(d.extent.contains(x) && d.extent.is_subset(&u), || format!("local (i) at {x}, {eta0:?}"))?;
            let t = check_transport(s, &d).map_err(|e| e.to_string())?;
            ensure(t.is_none(), || format!("local (ii) at {x}, {eta0:?}: {t:?}"))?;
            n += 1;
        }
        let c = eta_cover(s, p, &eta0).map_err(|e| e.to_string())?;
        ensure(c.covers && c.inside_own_value, || format!("cover (i) at {eta0:?}"))?;
        ensure(c.overshoot.is_none(), || format!("cover (ii) at {eta0:?}: {:?}", c.overshoot))?;
        ensure(c.exact_at_eta0, || format!("cover (iii) at {eta0:?}"))?;
    }
    Ok(n)
}

fn local_and_cover() -> Outcome {
    let s = e1(Mode::Balanced);
    let mut pairs = local_and_cover_checks(&s, &predicate_from_formula(&s, &parse(&s, "r(y)"), 1).unwrap())?;
    let atoms = invariant_atoms(&s, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let mut sel = sample(&mut rng, atoms.len(), 3).into_vec();
        sel.sort_unstable();
        pairs += local_and_cover_checks(&s, &union_of_atoms(&s, 1, &atoms, &sel).unwrap())?;
    }
    Ok(format!("{pairs} (point, η0) pairs checked for r(y) and 3 random atom unions"))
}

fn fibre_size_predicate(s: &Space) -> Predicate {
    Predicate::from_fn(s, 1, |m| {
        ClopenSet::from_indices(
            s.len(),
            (0..s.len()).filter(|&x| {
                let alpha = &s.point(x).enumeration;
                alpha.fibre(alpha.image(m[0])).len() == 1
            }),
        )
    })
    .unwrap()
}

fn negative_control() -> Outcome {
    let s = e1(Mode::Unbalanced);
    let q = fibre_size_predicate(&s);
    ensure(check_extensionality(&s, &q).unwrap().holds, || "q is not extensional".into())?;
    ensure(check_invariance(&s, &q, &symmetric_generators(4).unwrap()).unwrap().invariant, || {
        "q is not invariant".into()
    })?;
    let r = synthesize_definition(&s, &q).unwrap();
    ensure(!r.verified, || format!("q was defined by {}", r.psi))?;
    ensure(factors_through_elements(&s, &q).unwrap().is_some(), || "q factors through (M, α(η))".into())?;

    let classes = element_classes(&s, 1).unwrap();
    ensure(atom_decomposition(&q, &classes).is_none(), || "q is a union of element classes".into())?;
    let total = 1u64 << classes.len();
    for mask in 0..total {
        let sel: Vec<usize> = (0..classes.len()).filter(|i| mask >> i & 1 == 1).collect();
        ensure(union_of_atoms(&s, 1, &classes, &sel).unwrap() != q, || format!("definable predicate {mask} equals q"))?;
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.json");
    q.save(&path).unwrap();
    let theory = theories().join("unary.fol");
    let status = Command::new(env!("CARGO_BIN_EXE_bvdef"))
        .args(["synthesize", "--theory"])
        .arg(&theory)
        .args(["--max-size", "2", "--K", "4", "--mode", "unbalanced", "--predicate"])
        .arg(&path)
        .output()
        .unwrap()
        .status;
    ensure(status.code() == Some(2), || format!("CLI exit {:?}", status.code()))?;
    Ok(format!("verified=false, none of {total} definable predicates equals q, CLI exit 2"))
}

fn round_trip() -> Outcome {
    let s = e1(Mode::Balanced);
    let fs = corpus(s.class().signature(), &CorpusConfig::new(y_vars(1)), 50, 400);
    for phi in &fs {
        let p = predicate_from_formula(&s, phi, 1).unwrap();
        let r = synthesize_definition(&s, &p).unwrap();
        let v = verify_definition(&s, &p, &r.psi).unwrap();
        ensure(v.holds, || format!("`{phi}` gave ψ = {}", r.psi))?;
    }
    Ok(format!("{}/{} formulas round-trip", fs.len(), fs.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("space construction", space_construction),
        ("law suite", law_suite),
        ("equivariance", equivariance),
        ("conservativity", conservativity),
        ("soundness", soundness),
        ("completeness", completeness),
        ("local formulas and covers", local_and_cover),
        ("negative control", negative_control),
        ("round trip", round_trip),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({reason}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
