//! Cut elimination for inception display calculi: principal reductions,
//! parametric moves along congruence classes (rebuilding dreams where a class
//! enters one), and a lexicographic measure on cuts.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::checker::{check, path_string, Calculus, CheckError, Congruence, Derivation, NodePath, Occ, Step};
use crate::kernel::{display, Position, Sequent, Side, Structure, CUT_RULE, ID_RULE};
use crate::signature::{Family, Signature};
use crate::syntax::Formula;

/// Inception depth of the cut, complexity of the cut formula, and the sum of
/// the premise heights, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CutMeasure {
    pub depth: usize,
    pub complexity: usize,
    pub height: usize,
}

impl fmt::Display for CutMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.depth, self.complexity, self.height)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// One premise is an identity axiom.
    Identity,
    /// The cut formula is introduced by logical rules on both sides.
    Principal,
    /// The cut formula is parametric in the right (`into_right`) or left premise.
    Parametric { into_right: bool },
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Identity => write!(f, "identity"),
            StepKind::Principal => write!(f, "principal"),
            StepKind::Parametric { into_right: true } => write!(f, "parametric-right"),
            StepKind::Parametric { into_right: false } => write!(f, "parametric-left"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutStep {
    pub kind: StepKind,
    pub path: NodePath,
    pub formula: Formula,
    pub before: CutMeasure,
    /// Cuts created by the step, with their measures.
    pub after: Vec<(NodePath, CutMeasure)>,
    /// Dreams whose derivations were rebuilt by a parametric move.
    pub rebuilt: Vec<NodePath>,
}

impl fmt::Display for CutStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cut on {} at {} {}", self.kind, self.formula, path_string(&self.path), self.before)?;
        for p in &self.rebuilt {
            write!(f, "; rebuild dream {}", path_string(p))?;
        }
        for (p, m) in &self.after {
            write!(f, "; new cut at {} {m}", path_string(p))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CutElimError {
    #[error("input derivation is not valid: {0}")]
    Invalid(CheckError),
    #[error("no cut at {0}")]
    NotACut(String),
    #[error("cut at {0} is not uppermost")]
    NotUppermost(String),
    #[error("congruence class of the cut formula at {0} leaves the premise")]
    Escape(String),
    #[error("no reduction for the cut at {0}: {1}")]
    Stuck(String, String),
    #[error("step on the cut at {path} produced an invalid derivation: {err}")]
    Internal { path: String, err: CheckError },
    #[error("no termination within {0} steps")]
    Budget(usize),
}

fn rule_depths(calc: &Calculus) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for r in &calc.rules {
        for c in r.closure() {
            out.insert(c.name.clone(), c.depth);
        }
    }
    out
}

/// Maximal depth of a rule used anywhere in the derivation.
pub fn derivation_depth(d: &Derivation, depths: &BTreeMap<String, usize>) -> usize {
    let own = depths.get(&d.rule).copied().unwrap_or(0);
    d.children().map(|(_, c)| derivation_depth(c, depths)).fold(own, usize::max)
}

fn cut_formula(c: &Derivation) -> Option<&Formula> {
    match &c.premises.first()?.seq.succ {
        Structure::Formula(f) if c.rule == CUT_RULE => Some(f),
        _ => None,
    }
}

pub fn cut_measure(d: &Derivation, path: &[Step], calc: &Calculus) -> Option<CutMeasure> {
    let c = d.get(path)?;
    let a = cut_formula(c)?;
    let depths = rule_depths(calc);
    let (l, r) = (&c.premises[0], &c.premises[1]);
    Some(CutMeasure {
        depth: derivation_depth(l, &depths) + derivation_depth(r, &depths),
        complexity: a.complexity(),
        height: l.height() + r.height(),
    })
}

/// Every cut in the derivation, in postorder (premises, then dreams, then the node).
pub fn cuts(d: &Derivation) -> Vec<NodePath> {
    let mut out = Vec::new();
    for (s, c) in d.children() {
        for mut p in cuts(c) {
            p.insert(0, s);
            out.push(p);
        }
    }
    if d.rule == CUT_RULE {
        out.push(vec![]);
    }
    out
}

/// The first cut in postorder; no cut occurs above it.
pub fn uppermost_cut(d: &Derivation) -> Option<NodePath> {
    cuts(d).into_iter().next()
}

struct Ctx<'a> {
    sig: &'a Signature,
    params: BTreeSet<String>,
}

impl Ctx<'_> {
    /// A copy of `d` whose own parameters are renamed apart from all others.
    /// Parameters of its endsequent belong to an enclosing dream and are kept.
    fn fresh_copy(&mut self, d: &Derivation) -> Derivation {
        let mut own = BTreeSet::new();
        d.params(&mut own);
        let free = d.seq.params();
        own.retain(|p| !free.contains(p));
        let mut map = BTreeMap::new();
        for p in own {
            let base = p.split('_').next().unwrap_or(&p).to_string();
            let mut k = 1;
            let id = loop {
                let id = format!("{base}_{k}");
                if !self.params.contains(&id) {
                    break id;
                }
                k += 1;
            };
            self.params.insert(id.clone());
            map.insert(p, id);
        }
        d.rename_params(&map)
    }
}

/// Replaces the formula at `pos` in the conclusion of `delta` by `by`: the
/// formula is displayed, cut against `bridge` (proving `by |- A` in precedent
/// position, `A |- by` in succedent position) and the display is undone.
/// Returns the derivation, the path to the new cut and the path to `delta`.
fn replace_at(
    delta: Derivation,
    pos: &Position,
    by: &Structure,
    bridge: Derivation,
    sig: &Signature,
) -> (Derivation, NodePath, NodePath) {
    let (chain, side) = display(&delta.seq, pos, sig).expect("valid position");
    let target = delta.seq.replace_at(pos, by.clone());
    let (tchain, _) = display(&target, pos, sig).expect("valid position");
    let k = chain.len() - 1;
    let mut up = delta;
    for s in chain.into_iter().skip(1) {
        up = Derivation::node(s, "dp", vec![up], vec![]);
    }
    let (premises, di) = match side {
        Side::Ante => (vec![bridge, up], 1),
        Side::Succ => (vec![up, bridge], 0),
    };
    let mut down = Derivation::node(tchain[k].clone(), CUT_RULE, premises, vec![]);
    for s in tchain.into_iter().rev().skip(1) {
        down = Derivation::node(s, "dp", vec![down], vec![]);
    }
    let cut_path = vec![Step::Premise(0); k];
    let mut delta_path = cut_path.clone();
    delta_path.push(Step::Premise(di));
    delta_path.extend(vec![Step::Premise(0); k]);
    (down, cut_path, delta_path)
}

fn starts_with(p: &[Step], prefix: &[Step]) -> bool {
    p.len() >= prefix.len() && p[..prefix.len()] == *prefix
}

struct Rebuild<'a, 'b> {
    ctx: &'a mut Ctx<'b>,
    cong: &'a Congruence,
    base: NodePath,
    groups: BTreeMap<NodePath, Vec<(Side, Vec<usize>)>>,
    by: Structure,
    bridge: Derivation,
    new_cuts: Vec<NodePath>,
    rebuilt: BTreeSet<NodePath>,
}

impl Rebuild<'_, '_> {
    fn go(&mut self, node: &Derivation, rel: &NodePath) -> Derivation {
        let abs = |rel: &NodePath, base: &NodePath| {
            let mut p = base.clone();
            p.extend(rel);
            p
        };
        let occs = self.groups.get(rel).cloned().unwrap_or_default();
        let origin = occs.iter().any(|(side, path)| {
            !self.cong.is_parametric(&Occ {
                node: abs(rel, &self.base),
                side: *side,
                path: path.clone(),
            })
        });
        if !occs.is_empty() {
            if let Some(i) = rel.iter().position(|s| matches!(s, Step::Dream(_))) {
                self.rebuilt.insert(abs(&rel[..=i].to_vec(), &self.base));
            }
        }
        if origin {
            let mut delta = node.clone();
            let mut inner: Vec<NodePath> = Vec::new();
            for (side, path) in occs {
                let bridge = self.ctx.fresh_copy(&self.bridge);
                let (d, cut, dpath) = replace_at(delta, &(side, path), &self.by, bridge, self.ctx.sig);
                inner = inner
                    .into_iter()
                    .map(|p| {
                        let mut q = dpath.clone();
                        q.extend(p);
                        q
                    })
                    .collect();
                inner.push(cut);
                delta = d;
            }
            for c in inner {
                let mut p = rel.clone();
                p.extend(c);
                self.new_cuts.push(p);
            }
            return delta;
        }
        let mut seq = node.seq.clone();
        for (side, path) in &occs {
            seq = seq.replace_at(&(*side, path.clone()), self.by.clone());
        }
        let premises = node
            .premises
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut r = rel.clone();
                r.push(Step::Premise(i));
                self.go(c, &r)
            })
            .collect();
        let dreams = node
            .dreams
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut r = rel.clone();
                r.push(Step::Dream(i));
                self.go(c, &r)
            })
            .collect();
        Derivation {
            subst: if occs.is_empty() { node.subst.clone() } else { BTreeMap::new() },
            seq,
            rule: node.rule.clone(),
            premises,
            dreams,
        }
    }
}

/// Builds `A |- A` for any formula from identity axioms and logical rules.
pub fn identity_derivation(a: &Formula, sig: &Signature) -> Derivation {
    let f = |x: &Formula| Structure::Formula(x.clone());
    let seq = |l: Structure, r: Structure| Sequent::new(l, r);
    match a {
        Formula::Atom(_) => Derivation::leaf(seq(f(a), f(a)), ID_RULE),
        Formula::Top => Derivation::leaf(seq(f(a), f(a)), "top"),
        Formula::Bot => Derivation::leaf(seq(f(a), f(a)), "bot"),
        Formula::And(x, y) => Derivation::node(
            seq(f(a), f(a)),
            "and_R",
            vec![
                Derivation::node(seq(f(a), f(x)), "and_L1", vec![identity_derivation(x, sig)], vec![]),
                Derivation::node(seq(f(a), f(y)), "and_L2", vec![identity_derivation(y, sig)], vec![]),
            ],
            vec![],
        ),
        Formula::Or(x, y) => Derivation::node(
            seq(f(a), f(a)),
            "or_L",
            vec![
                Derivation::node(seq(f(x), f(a)), "or_R1", vec![identity_derivation(x, sig)], vec![]),
                Derivation::node(seq(f(y), f(a)), "or_R2", vec![identity_derivation(y, sig)], vec![]),
            ],
            vec![],
        ),
        Formula::Conn(n, args) => {
            let c = sig.get(n).expect("known connective");
            let ids: Vec<Derivation> = args.iter().map(|x| identity_derivation(x, sig)).collect();
            let structural = Structure::Conn(c.family, n.clone(), args.iter().map(f).collect());
            match c.family {
                Family::F => Derivation::node(
                    seq(f(a), f(a)),
                    &format!("{n}_L"),
                    vec![Derivation::node(seq(structural, f(a)), &format!("{n}_R"), ids, vec![])],
                    vec![],
                ),
                Family::G => Derivation::node(
                    seq(f(a), f(a)),
                    &format!("{n}_R"),
                    vec![Derivation::node(seq(f(a), structural), &format!("{n}_L"), ids, vec![])],
                    vec![],
                ),
            }
        }
        Formula::Nom(_) | Formula::Conom(_) | Formula::Meta(_) => panic!("not a formula of the logic"),
    }
}

/// Inserts a cut with an identity derivation at the node `at`, which must have
/// a formula as its whole succedent or antecedent.
pub fn insert_identity_cut(d: &Derivation, at: &[Step], sig: &Signature) -> Option<Derivation> {
    let n = d.get(at)?;
    let node = match (&n.seq.ante, &n.seq.succ) {
        (_, Structure::Formula(a)) => {
            Derivation::node(n.seq.clone(), CUT_RULE, vec![n.clone(), identity_derivation(a, sig)], vec![])
        }
        (Structure::Formula(a), _) => {
            Derivation::node(n.seq.clone(), CUT_RULE, vec![identity_derivation(a, sig), n.clone()], vec![])
        }
        _ => return None,
    };
    let mut out = d.clone();
    *out.get_mut(at)? = node;
    Some(out)
}

/// Inserts up to `count` identity cuts at randomly chosen eligible nodes.
pub fn insert_random_cuts(d: &Derivation, count: usize, rng: &mut impl Rng, sig: &Signature) -> Derivation {
    let mut out = d.clone();
    for _ in 0..count {
        let eligible: Vec<NodePath> = out
            .paths()
            .into_iter()
            .filter(|p| {
                let n = out.get(p).expect("path");
                n.rule != CUT_RULE
                    && (matches!(n.seq.succ, Structure::Formula(_)) || matches!(n.seq.ante, Structure::Formula(_)))
            })
            .collect();
        let Some(p) = eligible.choose(rng) else { break };
        out = insert_identity_cut(&out, p, sig).unwrap_or(out);
    }
    out
}

fn sub(p: &NodePath, s: Step) -> NodePath {
    let mut q = p.clone();
    q.push(s);
    q
}

/// Performs one reduction on the cut at `path`, which must be uppermost.
pub fn reduce_cut(d: &Derivation, path: &NodePath, calc: &Calculus) -> Result<(Derivation, CutStep), CutElimError> {
    let ps = path_string(path);
    let c = d.get(path).ok_or_else(|| CutElimError::NotACut(ps.clone()))?;
    let a = cut_formula(c).ok_or_else(|| CutElimError::NotACut(ps.clone()))?.clone();
    if !c.premises.iter().all(|p| p.is_cut_free()) {
        return Err(CutElimError::NotUppermost(ps));
    }
    let before = cut_measure(d, path, calc).expect("cut");
    let report = check(d, calc).map_err(CutElimError::Invalid)?;
    let cong = &report.congruence;
    let (p1, p2) = (&c.premises[0], &c.premises[1]);
    let mut params = BTreeSet::new();
    d.params(&mut params);
    let mut ctx = Ctx { sig: &calc.sig, params };
    let mut new_cuts: Vec<NodePath> = Vec::new();
    let mut rebuilt = Vec::new();

    let principal1 = p1.rule != ID_RULE
        && !cong.is_parametric(&Occ {
            node: sub(path, Step::Premise(0)),
            side: Side::Succ,
            path: vec![],
        });
    let principal2 = p2.rule != ID_RULE
        && !cong.is_parametric(&Occ {
            node: sub(path, Step::Premise(1)),
            side: Side::Ante,
            path: vec![],
        });

    let (kind, replacement) = if p1.rule == ID_RULE {
        (StepKind::Identity, p2.clone())
    } else if p2.rule == ID_RULE {
        (StepKind::Identity, p1.clone())
    } else if principal1 && principal2 {
        let r = principal(p1, p2, &a, &mut ctx, &mut new_cuts).map_err(|m| CutElimError::Stuck(ps.clone(), m))?;
        (StepKind::Principal, r)
    } else {
        let into_right = !principal2;
        let (target, root, by, bridge) = if into_right {
            (sub(path, Step::Premise(1)), Side::Ante, p1.seq.ante.clone(), p1.clone())
        } else {
            (sub(path, Step::Premise(0)), Side::Succ, p2.seq.succ.clone(), p2.clone())
        };
        let class = cong
            .class_of(&Occ {
                node: target.clone(),
                side: root,
                path: vec![],
            })
            .unwrap_or(&[]);
        let mut groups: BTreeMap<NodePath, Vec<(Side, Vec<usize>)>> = BTreeMap::new();
        for o in class {
            if !starts_with(&o.node, &target) {
                return Err(CutElimError::Escape(ps));
            }
            groups.entry(o.node[target.len()..].to_vec()).or_default().push((o.side, o.path.clone()));
        }
        let mut rb = Rebuild {
            ctx: &mut ctx,
            cong,
            base: target.clone(),
            groups,
            by,
            bridge,
            new_cuts: vec![],
            rebuilt: BTreeSet::new(),
        };
        let node = d.get(&target).expect("premise");
        let r = rb.go(node, &vec![]);
        new_cuts = rb.new_cuts;
        rebuilt = rb
            .rebuilt
            .into_iter()
            .map(|p| {
                let mut q = path.clone();
                q.extend(&p[target.len()..]);
                q
            })
            .collect();
        (StepKind::Parametric { into_right }, r)
    };

    if replacement.seq != c.seq {
        return Err(CutElimError::Stuck(
            ps,
            format!("reduction proves `{}` instead of `{}`", replacement.seq, c.seq),
        ));
    }
    let mut out = d.clone();
    *out.get_mut(path).expect("cut path") = replacement;
    check(&out, calc).map_err(|err| CutElimError::Internal { path: ps.clone(), err })?;
    let after = new_cuts
        .into_iter()
        .map(|rel| {
            let mut p = path.clone();
            p.extend(rel);
            let m = cut_measure(&out, &p, calc).expect("new cut");
            (p, m)
        })
        .collect();
    Ok((
        out,
        CutStep {
            kind,
            path: path.clone(),
            formula: a,
            before,
            after,
            rebuilt,
        },
    ))
}

fn principal(
    p1: &Derivation,
    p2: &Derivation,
    a: &Formula,
    ctx: &mut Ctx,
    new_cuts: &mut Vec<NodePath>,
) -> Result<Derivation, String> {
    let cut = |l: &Derivation, r: &Derivation, new_cuts: &mut Vec<NodePath>| {
        new_cuts.push(vec![]);
        Derivation::node(Sequent::new(l.seq.ante.clone(), r.seq.succ.clone()), CUT_RULE, vec![l.clone(), r.clone()], vec![])
    };
    match (a, p1.rule.as_str(), p2.rule.as_str()) {
        (Formula::And(..), "and_R", "and_L1") => Ok(cut(&p1.premises[0], &p2.premises[0], new_cuts)),
        (Formula::And(..), "and_R", "and_L2") => Ok(cut(&p1.premises[1], &p2.premises[0], new_cuts)),
        (Formula::Or(..), "or_R1", "or_L") => Ok(cut(&p1.premises[0], &p2.premises[0], new_cuts)),
        (Formula::Or(..), "or_R2", "or_L") => Ok(cut(&p1.premises[0], &p2.premises[1], new_cuts)),
        (Formula::Conn(n, args), r1, r2) => {
            let c = ctx.sig.get(n).ok_or("unknown connective")?;
            let (rho, side, others, bridges) = match c.family {
                Family::F if r1 == format!("{n}_R") && r2 == format!("{n}_L") => {
                    (&p2.premises[0], Side::Ante, p1.seq.ante.args().to_vec(), &p1.premises)
                }
                Family::G if r1 == format!("{n}_R") && r2 == format!("{n}_L") => {
                    (&p1.premises[0], Side::Succ, p2.seq.succ.args().to_vec(), &p2.premises)
                }
                _ => return Err(format!("{r1} and {r2} do not both introduce {a}")),
            };
            let mut delta = rho.clone();
            let mut inner: Vec<NodePath> = Vec::new();
            for i in 0..args.len() {
                let (d, cutp, dpath) = replace_at(delta, &(side, vec![i]), &others[i], bridges[i].clone(), ctx.sig);
                inner = inner
                    .into_iter()
                    .map(|p| {
                        let mut q = dpath.clone();
                        q.extend(p);
                        q
                    })
                    .collect();
                inner.push(cutp);
                delta = d;
            }
            new_cuts.extend(inner);
            Ok(delta)
        }
        _ => Err(format!("{} and {} do not both introduce {a}", p1.rule, p2.rule)),
    }
}

/// Eliminates every cut, always reducing an uppermost one. Each step's new
/// cuts have a strictly smaller measure than the cut it reduces.
pub fn eliminate_all_cuts(d: &Derivation, calc: &Calculus) -> Result<(Derivation, Vec<CutStep>), CutElimError> {
    const BUDGET: usize = 20_000;
    check(d, calc).map_err(CutElimError::Invalid)?;
    let mut cur = d.clone();
    let mut trace = Vec::new();
    while let Some(p) = uppermost_cut(&cur) {
        if trace.len() >= BUDGET {
            return Err(CutElimError::Budget(BUDGET));
        }
        let (next, step) = reduce_cut(&cur, &p, calc)?;
        cur = next;
        trace.push(step);
    }
    Ok((cur, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::parse_sequent;
    use crate::syntax::parse_formula;
    use crate::syntax::tests::sig;

    fn calc() -> Calculus {
        Calculus::new(sig(), vec![])
    }

    #[test]
    fn identity_derivations_check() {
        let s = sig();
        for t in ["p", "dia(p) o box(q)", "p & (q | top)", "tri(dia(p))", "p star bot", "p & q"] {
            let f = parse_formula(t, &s).unwrap();
            let d = identity_derivation(&f, &s);
            check(&d, &calc()).unwrap_or_else(|e| panic!("{t}: {e}"));
        }
    }

    #[test]
    fn eliminates_identity_cuts() {
        let s = sig();
        for t in ["dia(p) o box(q)", "p & (q | top)", "tri(dia(p))", "p star q"] {
            let f = parse_formula(t, &s).unwrap();
            let d = identity_derivation(&f, &s);
            let with = insert_identity_cut(&d, &[], &s).unwrap();
            let (out, trace) = eliminate_all_cuts(&with, &calc()).unwrap();
            assert!(out.is_cut_free());
            assert_eq!(out.seq, d.seq);
            for st in &trace {
                assert!(st.after.iter().all(|(_, m)| *m < st.before), "{st}");
            }
        }
    }

    #[test]
    fn parametric_move_through_display() {
        let s = sig();
        let seq = |t: &str| parse_sequent(t, &s).unwrap();
        let inner = Derivation::node(
            seq("^dia(p) |- dia(p)"),
            "dia_R",
            vec![Derivation::leaf(seq("p |- p"), "Id")],
            vec![],
        );
        let d = Derivation::node(seq("p |- !bbox(dia(p))"), "dp", vec![inner], vec![]);
        let cut = Derivation::node(
            seq("p |- !bbox(dia(p))"),
            CUT_RULE,
            vec![Derivation::leaf(seq("p |- p"), "Id"), d.clone()],
            vec![],
        );
        let (out, _) = eliminate_all_cuts(&cut, &calc()).unwrap();
        assert_eq!(out, d);
        let with = insert_identity_cut(&d.premises[0], &[], &s).unwrap();
        let (out, trace) = eliminate_all_cuts(&with, &calc()).unwrap();
        assert!(out.is_cut_free());
        assert!(!trace.is_empty());
    }
}
