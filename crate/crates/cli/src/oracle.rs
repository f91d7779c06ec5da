//! Semantic cross-check of ALBA runs on random finite LE-algebras.

use inception::algebra::{axiom_valid, clause_valid, enumerate_algebras};
use inception::alba::run_alba;
use inception::signature::Signature;
use inception::syntax::Inequality;

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub seed: u64,
    pub count: usize,
    pub max_size: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    /// One line per algebra.
    pub verdicts: Vec<String>,
    pub mismatches: Vec<String>,
    /// Number of (algebra, step) comparisons made.
    pub comparisons: usize,
}

/// For every algebra, the axiom must agree with each of its components, and
/// each component with every intermediate clause of its run.
pub fn sweep(ineq: &Inequality, sig: &Signature, cfg: &SweepConfig) -> Result<SweepReport, String> {
    let run = run_alba(ineq, sig).map_err(|e| e.to_string())?;
    let mut report = SweepReport::default();
    for (k, alg) in enumerate_algebras(sig, cfg.max_size, cfg.seed, cfg.count).enumerate() {
        let av = axiom_valid(ineq, &alg).map_err(|e| e.to_string())?;
        let mut all = true;
        let mut steps = 0;
        for (ci, c) in run.components.iter().enumerate() {
            let cv = axiom_valid(&c.inequality, &alg).map_err(|e| e.to_string())?;
            all &= cv;
            for (si, s) in c.trace.iter().enumerate() {
                let sv = clause_valid(&s.clause, &alg).map_err(|e| e.to_string())?;
                report.comparisons += 1;
                steps += 1;
                if sv != cv {
                    report.mismatches.push(format!(
                        "algebra {k}, component {}, step {} ({}): expected {cv}, got {sv}",
                        ci + 1,
                        si + 1,
                        s.kind
                    ));
                }
            }
            let fv = clause_valid(&c.clause, &alg).map_err(|e| e.to_string())?;
            report.comparisons += 1;
            if fv != cv {
                report
                    .mismatches
                    .push(format!("algebra {k}, component {}: final clause {fv}, component {cv}", ci + 1));
            }
        }
        report.comparisons += 1;
        if all != av {
            report.mismatches.push(format!("algebra {k}: axiom {av}, components {all}"));
        }
        report
            .verdicts
            .push(format!("algebra {k} (size {}): valid {av}, {steps} steps compared", alg.size));
    }
    Ok(report)
}
