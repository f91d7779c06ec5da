//! Replays the acceptance criteria on a corpus. Each criterion yields one outcome.

use std::fmt;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use inception::alba::run_alba;
use inception::checker::{check, path_string, Derivation, Step};
use inception::cutelim::{eliminate_all_cuts, insert_random_cuts, StepKind};
use inception::kernel::parse_sequent;
use inception::rulegen::{alpha_eq, check_analytic, lint, translate, InceptionRule};
use inception::signature::Polarity;
use inception::syntax::{check_inductive, find_inductive_certificate, parse_axiom_file, parse_inequality};

use crate::corpus::{read, Corpus, Example};
use crate::oracle::{sweep, SweepConfig};

/// Examples with a golden final ALBA clause.
pub const ALBA_GOLDEN: [&str; 6] = ["sahlqvist", "ex32", "ex35", "ex36", "ex37", "ex38"];
/// Examples with printed rules, and the depth stated for each.
pub const RULE_GOLDEN: [(&str, usize); 5] = [("ex32", 1), ("ex35", 2), ("ex36", 1), ("ex37", 1), ("ex38", 3)];
/// The cut-elimination example and its expected endsequent.
pub const CUT_EXAMPLE: &str = "ex410";
pub const CUT_ENDSEQUENT: &str = "^o(^dia(p), ^dia(p)) |- p";

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    pub algebras: usize,
    pub max_size: usize,
    pub cut_derivations: usize,
    pub min_mutants: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            seed: 1,
            algebras: 200,
            max_size: 4,
            cut_derivations: 120,
            min_mutants: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub result: Result<String, String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            Ok(d) => write!(f, "criterion {} PASS: {}: {d}", self.id, self.title),
            Err(d) => write!(f, "criterion {} FAIL: {}: {d}", self.id, self.title),
        }
    }
}

pub const TITLES: [&str; 8] = [
    "ALBA golden runs",
    "rule generation golden files",
    "derivation replay and mutants",
    "cut elimination golden run",
    "oracle equivalence",
    "cut elimination properties",
    "structural linter",
    "classification numbers",
];

pub fn run(id: usize, corpus: &Corpus, cfg: &Config) -> Outcome {
    let result = match id {
        1 => alba_golden(corpus),
        2 => rules_golden(corpus),
        3 => replay(corpus, cfg),
        4 => cut_golden(corpus),
        5 => oracle(corpus, cfg),
        6 => cut_properties(corpus, cfg),
        7 => linter(corpus),
        8 => classification(corpus),
        _ => Err(format!("no criterion {id}")),
    };
    Outcome {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        result,
    }
}

pub fn run_all(corpus: &Corpus, cfg: &Config) -> Vec<Outcome> {
    (1..=8).map(|i| run(i, corpus, cfg)).collect()
}

type Res = Result<String, String>;

fn e(x: impl fmt::Display) -> String {
    x.to_string()
}

fn generated(ex: &Example, corpus: &Corpus) -> Result<InceptionRule, String> {
    let run = run_alba(&ex.axiom, &corpus.sig).map_err(|x| format!("{}: {x}", ex.name))?;
    if run.components.len() != 1 {
        return Err(format!("{}: expected one component, got {}", ex.name, run.components.len()));
    }
    Ok(translate(&run.components[0].clause, &ex.name, &corpus.sig)
        .map_err(|x| format!("{}: {x}", ex.name))?
        .0)
}

fn alba_golden(corpus: &Corpus) -> Res {
    for name in ALBA_GOLDEN {
        let ex = corpus.example(name).map_err(e)?;
        let expected = ex.clause(&corpus.sig).map_err(e)?.ok_or(format!("{name}: no clause.txt"))?;
        let run = run_alba(&ex.axiom, &corpus.sig).map_err(|x| format!("{name}: {x}"))?;
        let [c] = run.components.as_slice() else {
            return Err(format!("{name}: expected one component"));
        };
        if !c.clause.alpha_eq(&expected) {
            return Err(format!("{name}: got {}, expected {expected}", c.clause));
        }
    }
    Ok(format!("{} final clauses match up to renaming", ALBA_GOLDEN.len()))
}

fn rules_golden(corpus: &Corpus) -> Res {
    let mut depths = Vec::new();
    for (name, depth) in RULE_GOLDEN {
        let ex = corpus.example(name).map_err(e)?;
        let rule = generated(ex, corpus)?;
        let golden = ex.expected_rules(&corpus.sig).map_err(e)?;
        let [expected] = golden.rules.as_slice() else {
            return Err(format!("{name}: expected_rules.json must hold one rule"));
        };
        if !alpha_eq(&rule, expected) {
            return Err(format!("{name}: generated rule differs from the printed one"));
        }
        if rule.depth != depth || ex.meta.depth != depth {
            return Err(format!("{name}: depth {} (recorded {}, expected {depth})", rule.depth, ex.meta.depth));
        }
        let shipped = ex.rules(&corpus.sig).map_err(e)?;
        if shipped.rules != vec![rule.clone()] {
            return Err(format!("{name}: rules.json is out of date"));
        }
        depths.push(rule.depth.to_string());
    }
    Ok(format!("rules match up to renaming, depths {}", depths.join(", ")))
}

fn replay(corpus: &Corpus, cfg: &Config) -> Res {
    let mut accepted = 0;
    for (name, _) in RULE_GOLDEN {
        let ex = corpus.example(name).map_err(e)?;
        let calc = ex.calculus().map_err(e)?;
        let d = ex.derivation(&calc.sig).map_err(e)?.ok_or(format!("{name}: no derivation"))?;
        check(&d, &calc).map_err(|x| format!("{name}: rejected at {}: {x}", path_string(&x.path)))?;
        if d.seq != endsequent_of(ex)? {
            return Err(format!("{name}: derivation ends in {}, not the axiom", d.seq));
        }
        accepted += 1;
    }
    let mutants = corpus.mutants().map_err(e)?;
    if mutants.len() < cfg.min_mutants {
        return Err(format!("only {} mutants", mutants.len()));
    }
    for m in &mutants {
        match check(&m.derivation, &m.calculus) {
            Ok(_) => return Err(format!("mutant {} accepted", m.name)),
            Err(x) => {
                if x.path != m.expect_path || x.kind.code() != m.expect_kind {
                    return Err(format!(
                        "mutant {}: rejected at {} [{}], expected {} [{}]",
                        m.name,
                        path_string(&x.path),
                        x.kind.code(),
                        path_string(&m.expect_path),
                        m.expect_kind
                    ));
                }
            }
        }
    }
    Ok(format!("{accepted} derivations accepted, {} mutants rejected at the expected nodes", mutants.len()))
}

/// The sequent `lhs |- rhs` of an example's axiom.
fn endsequent_of(ex: &Example) -> Result<inception::kernel::Sequent, String> {
    let sig = ex.calculus().map_err(e)?.sig;
    parse_sequent(&format!("{} |- {}", ex.axiom.lhs, ex.axiom.rhs), &sig).map_err(e)
}

fn inside(p: &[Step], prefix: &[Step]) -> bool {
    p.len() > prefix.len() && p.starts_with(prefix)
}

fn cut_golden(corpus: &Corpus) -> Res {
    let ex = corpus.example(CUT_EXAMPLE).map_err(e)?;
    let calc = ex.calculus().map_err(e)?;
    let d = ex.derivation(&calc.sig).map_err(e)?.ok_or("no derivation")?;
    let expected = parse_sequent(CUT_ENDSEQUENT, &calc.sig).map_err(e)?;
    if d.seq != expected || d.is_cut_free() {
        return Err(format!("input must be a derivation with cuts of {expected}"));
    }
    let (out, trace) = eliminate_all_cuts(&d, &calc).map_err(e)?;
    if out.seq != expected || !out.is_cut_free() {
        return Err(format!("result ends in {} (cut-free {})", out.seq, out.is_cut_free()));
    }
    check(&out, &calc).map_err(|x| format!("result rejected: {x}"))?;
    let rebuilding: Vec<_> = trace.iter().filter(|s| !s.rebuilt.is_empty()).collect();
    let [step] = rebuilding.as_slice() else {
        return Err(format!("{} steps rebuild dreams, expected one", rebuilding.len()));
    };
    if !matches!(step.kind, StepKind::Parametric { .. }) {
        return Err(format!("the rebuilding step is {}", step.kind));
    }
    let first = trace.first().ok_or("empty trace")?;
    if !std::ptr::eq(first, *step) {
        return Err("the first step does not rebuild the dream".into());
    }
    let in_dream = step
        .after
        .iter()
        .any(|(p, _)| step.rebuilt.iter().any(|r| inside(p, r) || p == r));
    if !in_dream {
        return Err("no new cut inside the rebuilt dream".into());
    }
    Ok(format!(
        "{} steps; step 1 {} rebuilds {} with a new cut inside, then eliminated",
        trace.len(),
        step.kind,
        path_string(&step.rebuilt[0])
    ))
}

fn oracle(corpus: &Corpus, cfg: &Config) -> Res {
    let sc = SweepConfig {
        seed: cfg.seed,
        count: cfg.algebras,
        max_size: cfg.max_size,
    };
    let mut comparisons = 0;
    for ex in &corpus.examples {
        let r = sweep(&ex.axiom, &corpus.sig, &sc).map_err(|x| format!("{}: {x}", ex.name))?;
        if let Some(m) = r.mismatches.first() {
            return Err(format!("{}: {} mismatches, first: {m}", ex.name, r.mismatches.len()));
        }
        comparisons += r.comparisons;
    }
    Ok(format!(
        "{} axioms x {} algebras (size <= {}), {comparisons} comparisons, 0 mismatches",
        corpus.examples.len(),
        cfg.algebras,
        cfg.max_size
    ))
}

fn cut_properties(corpus: &Corpus, cfg: &Config) -> Res {
    let mut bases = Vec::new();
    for ex in &corpus.examples {
        let calc = ex.calculus().map_err(e)?;
        if let Some(d) = ex.derivation(&calc.sig).map_err(e)? {
            bases.push((ex.name.clone(), calc, d));
        }
    }
    if bases.is_empty() {
        return Err("no derivations".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut steps = 0;
    for k in 0..cfg.cut_derivations {
        let (name, calc, base) = &bases[k % bases.len()];
        let count = 1 + k % 3;
        let d = insert_random_cuts(base, count, &mut rng, &calc.sig);
        let label = format!("{name} #{k}");
        check(&d, calc).map_err(|x| format!("{label}: generated derivation rejected: {x}"))?;
        if d.is_cut_free() {
            return Err(format!("{label}: no cut inserted"));
        }
        let (out, trace) = eliminate_all_cuts(&d, calc).map_err(|x| format!("{label}: {x}"))?;
        verify_result(&d, &out, calc).map_err(|x| format!("{label}: {x}"))?;
        for s in &trace {
            if let Some((p, m)) = s.after.iter().find(|(_, m)| *m >= s.before) {
                return Err(format!("{label}: cut at {} has {m}, not below {}", path_string(p), s.before));
            }
        }
        steps += trace.len();
    }
    Ok(format!(
        "{} derivations with cuts, {steps} reduction steps, measure decreasing at each",
        cfg.cut_derivations
    ))
}

fn verify_result(input: &Derivation, out: &Derivation, calc: &inception::checker::Calculus) -> Result<(), String> {
    if out.seq != input.seq {
        return Err(format!("endsequent changed to {}", out.seq));
    }
    if !out.is_cut_free() {
        return Err("result has cuts".into());
    }
    check(out, calc).map_err(|x| format!("result rejected: {x}"))?;
    Ok(())
}

fn all_inputs(corpus: &Corpus) -> Result<Vec<(String, inception::syntax::Inequality)>, String> {
    let mut out: Vec<_> = corpus.examples.iter().map(|x| (x.name.clone(), x.axiom.clone())).collect();
    for (i, a) in analytic_inputs(corpus)?.into_iter().enumerate() {
        out.push((format!("analytic {}", i + 1), a));
    }
    Ok(out)
}

fn analytic_inputs(corpus: &Corpus) -> Result<Vec<inception::syntax::Inequality>, String> {
    let text = read(&corpus.root.join("analytic.txt")).map_err(e)?;
    parse_axiom_file(&text, &corpus.sig).map_err(e)
}

fn linter(corpus: &Corpus) -> Res {
    let mut rules = 0;
    for (name, ineq) in all_inputs(corpus)? {
        let run = run_alba(&ineq, &corpus.sig).map_err(|x| format!("{name}: {x}"))?;
        for c in &run.components {
            let (rule, _) = translate(&c.clause, "R", &corpus.sig).map_err(|x| format!("{name}: {x}"))?;
            let mut issues = lint(&rule, &corpus.sig);
            if rule.depth == 0 {
                issues.extend(check_analytic(&rule));
            }
            for r in rule.closure().into_iter().skip(1).filter(|r| r.depth == 0) {
                issues.extend(check_analytic(r).into_iter().filter(|i| i.condition == "linearity"));
            }
            if let Some(i) = issues.first() {
                return Err(format!("{name}: {}: {} {}", i.rule, i.condition, i.msg));
            }
            rules += rule.closure().len();
        }
    }
    Ok(format!("{rules} generated rules pass C1-C5, freshness and linearity"))
}

fn classification(corpus: &Corpus) -> Res {
    let ex32 = parse_inequality("box(dia(p) o p) o dia(p) <= p", &corpus.sig).map_err(e)?;
    let c = find_inductive_certificate(&ex32, &corpus.sig).ok_or("not inductive")?;
    if c.depth != 1 {
        return Err(format!("depth of {ex32} is {}", c.depth));
    }
    let mut analytic = 0;
    let mut inputs = analytic_inputs(corpus)?;
    inputs.extend(corpus.examples.iter().filter(|x| x.meta.analytic).map(|x| x.axiom.clone()));
    for a in &inputs {
        let c = find_inductive_certificate(a, &corpus.sig).ok_or(format!("{a} not inductive"))?;
        if !c.analytic || c.depth != 0 {
            return Err(format!("{a}: analytic {}, depth {}", c.analytic, c.depth));
        }
        analytic += 1;
    }
    for ex in &corpus.examples {
        let c = find_inductive_certificate(&ex.axiom, &corpus.sig).ok_or(format!("{} not inductive", ex.name))?;
        if c.analytic && c.depth != 0 {
            return Err(format!("{}: analytic with depth {}", ex.name, c.depth));
        }
        if c.depth != ex.meta.depth {
            return Err(format!("{}: depth {}, recorded {}", ex.name, c.depth, ex.meta.depth));
        }
    }
    let sq = parse_inequality("dia(box(p)) <= box(dia(box(p)))", &corpus.sig).map_err(e)?;
    if !check_inductive(&sq, &vec![("p".to_string(), Polarity::Pos)], &[], &corpus.sig) {
        return Err("certificate eps(p)=1 rejected for the Sahlqvist axiom".into());
    }
    Ok(format!("depth 1; {analytic} analytic inputs at depth 0; eps(p)=1 accepted"))
}
