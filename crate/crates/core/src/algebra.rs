//! Finite LE-algebras: a brute-force semantic oracle for formulas, inequalities
//! and quantified clauses.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alba::Clause;
use crate::signature::{Family, Origin, Polarity, Signature};
use crate::syntax::{Formula, Inequality};

/// Enumeration bound on the number of valuations a single check may visit.
pub const ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("unmapped variable `{0}`")]
    Unmapped(String),
    #[error("no table for connective `{0}`")]
    NoTable(String),
    #[error("enumeration of {0} valuations exceeds the bound {ENUMERATION_CAP}")]
    TooLarge(u128),
    #[error("algebra file: {0}")]
    File(String),
    #[error("invalid algebra: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    pub arity: usize,
    /// Row-major: the index of `(a_1..a_n)` is `sum a_i * size^(n-i)`.
    pub values: Vec<usize>,
}

impl OpTable {
    pub fn get(&self, size: usize, args: &[usize]) -> usize {
        let mut idx = 0;
        for &a in args {
            idx = idx * size + a;
        }
        self.values[idx]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLEAlgebra {
    pub size: usize,
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
    pub top: usize,
    pub bot: usize,
    pub ops: HashMap<String, OpTable>,
}

pub type Valuation = HashMap<String, usize>;

fn tuples(size: usize, arity: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = size.pow(arity as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0; arity];
        for i in (0..arity).rev() {
            v[i] = k % size;
            k /= size;
        }
        v
    })
}

impl FiniteLEAlgebra {
    /// Builds the lattice structure from an order; fails if it is not a lattice.
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<FiniteLEAlgebra, AlgebraError> {
        let n = leq.len();
        if n == 0 {
            return Err(AlgebraError::Invalid("empty carrier".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(AlgebraError::Invalid("order not reflexive".into()));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(AlgebraError::Invalid("order not antisymmetric".into()));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(AlgebraError::Invalid("order not transitive".into()));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, upper: bool| -> Option<usize> {
            let cands: Vec<usize> = (0..n)
                .filter(|&c| if upper { leq[a][c] && leq[b][c] } else { leq[c][a] && leq[c][b] })
                .collect();
            cands.iter().copied().find(|&c| {
                cands
                    .iter()
                    .all(|&d| if upper { leq[c][d] } else { leq[d][c] })
            })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                join[a][b] = bound(a, b, true).ok_or_else(|| AlgebraError::Invalid("missing join".into()))?;
                meet[a][b] = bound(a, b, false).ok_or_else(|| AlgebraError::Invalid("missing meet".into()))?;
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|a| leq[a][t]))
            .ok_or_else(|| AlgebraError::Invalid("no top".into()))?;
        let bot = (0..n)
            .find(|&b| (0..n).all(|a| leq[b][a]))
            .ok_or_else(|| AlgebraError::Invalid("no bottom".into()))?;
        Ok(FiniteLEAlgebra {
            size: n,
            leq,
            join,
            meet,
            top,
            bot,
            ops: HashMap::new(),
        })
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// `a <= b` under polarity `e` (reversed for ∂).
    fn le_e(&self, a: usize, b: usize, e: Polarity) -> bool {
        match e {
            Polarity::Pos => self.leq[a][b],
            Polarity::Neg => self.leq[b][a],
        }
    }

    fn join_all(&self, xs: impl Iterator<Item = usize>) -> usize {
        xs.fold(self.bot, |a, b| self.join[a][b])
    }

    fn meet_all(&self, xs: impl Iterator<Item = usize>) -> usize {
        xs.fold(self.top, |a, b| self.meet[a][b])
    }

    pub fn op(&self, name: &str, args: &[usize]) -> Result<usize, AlgebraError> {
        let t = self
            .ops
            .get(name)
            .ok_or_else(|| AlgebraError::NoTable(name.to_string()))?;
        Ok(t.get(self.size, args))
    }

    /// Computes the residual tables of every non-primitive connective of `sig`.
    pub fn complete_residuals(&mut self, sig: &Signature) -> Result<(), AlgebraError> {
        for c in &sig.connectives {
            let Origin::Residual { parent, coord } = &c.origin else { continue };
            let k = *coord;
            let h = sig.get(parent).expect("closed signature");
            let ht = self
                .ops
                .get(parent)
                .ok_or_else(|| AlgebraError::NoTable(parent.clone()))?
                .clone();
            let n = h.arity();
            let mut values = vec![0; self.size.pow(n as u32)];
            for (idx, args) in tuples(self.size, n).enumerate() {
                let y = args[k];
                let cands = (0..self.size).filter(|&x| {
                    let mut a = args.clone();
                    a[k] = x;
                    let v = ht.get(self.size, &a);
                    match h.family {
                        Family::F => self.leq[v][y],
                        Family::G => self.leq[y][v],
                    }
                });
                values[idx] = match (h.family, h.order_type.get(k)) {
                    (Family::F, Polarity::Pos) | (Family::G, Polarity::Neg) => self.join_all(cands),
                    (Family::F, Polarity::Neg) | (Family::G, Polarity::Pos) => self.meet_all(cands),
                };
            }
            self.ops.insert(c.name.clone(), OpTable { arity: n, values });
        }
        Ok(())
    }

    /// Checks the operator, normality and residuation laws for every connective.
    pub fn validate(&self, sig: &Signature) -> Vec<String> {
        let mut errs = Vec::new();
        let n = self.size;
        for c in &sig.connectives {
            let Some(t) = self.ops.get(&c.name) else {
                errs.push(format!("{}: missing table", c.name));
                continue;
            };
            if t.values.len() != n.pow(c.arity() as u32) || t.values.iter().any(|&v| v >= n) {
                errs.push(format!("{}: malformed table", c.name));
                continue;
            }
            let fam = c.family;
            for i in 0..c.arity() {
                let e = c.order_type.get(i);
                for args in tuples(n, c.arity()) {
                    for y in 0..n {
                        let mut a1 = args.clone();
                        let mut a2 = args.clone();
                        a2[i] = y;
                        let x = args[i];
                        // combine in coordinate i: ε-join for F, ε-meet for G
                        let comb = match (fam, e) {
                            (Family::F, Polarity::Pos) | (Family::G, Polarity::Neg) => self.join[x][y],
                            _ => self.meet[x][y],
                        };
                        a1[i] = comb;
                        let lhs = t.get(n, &a1);
                        let (v1, v2) = (t.get(n, &args), t.get(n, &a2));
                        let rhs = match fam {
                            Family::F => self.join[v1][v2],
                            Family::G => self.meet[v1][v2],
                        };
                        if lhs != rhs {
                            errs.push(format!("{}: coordinate {} not preserved at {:?},{}", c.name, i + 1, args, y));
                        }
                    }
                    let mut a = args.clone();
                    let (unit, want) = match (fam, e) {
                        (Family::F, Polarity::Pos) => (self.bot, self.bot),
                        (Family::F, Polarity::Neg) => (self.top, self.bot),
                        (Family::G, Polarity::Pos) => (self.top, self.top),
                        (Family::G, Polarity::Neg) => (self.bot, self.top),
                    };
                    a[i] = unit;
                    if t.get(n, &a) != want {
                        errs.push(format!("{}: not normal in coordinate {}", c.name, i + 1));
                    }
                }
                let Some(r) = self.ops.get(&c.residuals[i]) else {
                    errs.push(format!("{}: missing residual table", c.name));
                    continue;
                };
                for args in tuples(n, c.arity()) {
                    for y in 0..n {
                        let x = args[i];
                        let mut ry = args.clone();
                        ry[i] = y;
                        let hv = t.get(n, &args);
                        let rv = r.get(n, &ry);
                        let left = match fam {
                            Family::F => self.leq[hv][y],
                            Family::G => self.leq[y][hv],
                        };
                        let right = match (fam, e) {
                            (Family::F, Polarity::Pos) | (Family::G, Polarity::Neg) => self.leq[x][rv],
                            _ => self.leq[rv][x],
                        };
                        if left != right {
                            errs.push(format!(
                                "{} / {}: residuation fails at {:?}, {}",
                                c.name, c.residuals[i], args, y
                            ));
                        }
                    }
                }
            }
        }
        errs.sort();
        errs.dedup();
        errs
    }

    pub fn to_json(&self, sig: &Signature) -> String {
        let file = AlgebraFile {
            size: self.size,
            leq: self
                .leq
                .iter()
                .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
                .collect(),
            ops: sig
                .primitives
                .iter()
                .filter_map(|p| self.ops.get(&p.name).map(|t| (p.name.clone(), t.values.clone())))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, sig: &Signature) -> Result<FiniteLEAlgebra, AlgebraError> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| AlgebraError::File(e.to_string()))?;
        if file.leq.len() != file.size {
            return Err(AlgebraError::File("leq must have one row per element".into()));
        }
        let mut leq = Vec::new();
        for row in &file.leq {
            let bits: Vec<bool> = row.chars().map(|c| c == '1').collect();
            if bits.len() != file.size || row.chars().any(|c| c != '0' && c != '1') {
                return Err(AlgebraError::File(format!("bad leq row `{row}`")));
            }
            leq.push(bits);
        }
        let mut alg = FiniteLEAlgebra::from_order(leq)?;
        for p in &sig.primitives {
            let values = file
                .ops
                .get(&p.name)
                .ok_or_else(|| AlgebraError::NoTable(p.name.clone()))?
                .clone();
            alg.ops.insert(
                p.name.clone(),
                OpTable {
                    arity: p.order_type.arity(),
                    values,
                },
            );
        }
        alg.complete_residuals(sig)?;
        let errs = alg.validate(sig);
        if !errs.is_empty() {
            return Err(AlgebraError::Invalid(errs.join("; ")));
        }
        Ok(alg)
    }

    pub fn evaluate(&self, f: &Formula, val: &Valuation) -> Result<usize, AlgebraError> {
        match f {
            Formula::Atom(x) | Formula::Nom(x) | Formula::Conom(x) | Formula::Meta(x) => {
                let key = var_name(f).unwrap_or_else(|| x.clone());
                val.get(&key).copied().ok_or(AlgebraError::Unmapped(key))
            }
            Formula::Top => Ok(self.top),
            Formula::Bot => Ok(self.bot),
            Formula::And(a, b) => Ok(self.meet[self.evaluate(a, val)?][self.evaluate(b, val)?]),
            Formula::Or(a, b) => Ok(self.join[self.evaluate(a, val)?][self.evaluate(b, val)?]),
            Formula::Conn(n, args) => {
                let vs = args
                    .iter()
                    .map(|a| self.evaluate(a, val))
                    .collect::<Result<Vec<_>, _>>()?;
                self.op(n, &vs)
            }
        }
    }

    pub fn holds(&self, i: &Inequality, val: &Valuation) -> Result<bool, AlgebraError> {
        Ok(self.leq[self.evaluate(&i.lhs, val)?][self.evaluate(&i.rhs, val)?])
    }
}

/// Valuation key of a variable leaf: atoms by name, nominals `@j`, conominals `%m`.
pub fn var_name(f: &Formula) -> Option<String> {
    match f {
        Formula::Atom(p) => Some(p.clone()),
        Formula::Nom(j) => Some(format!("@{j}")),
        Formula::Conom(m) => Some(format!("%{m}")),
        Formula::Meta(a) => Some(format!("?{a}")),
        _ => None,
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    size: usize,
    leq: Vec<String>,
    ops: BTreeMap<String, Vec<usize>>,
}

fn check_budget(size: usize, vars: usize) -> Result<(), AlgebraError> {
    let total = (size as u128).checked_pow(vars as u32).unwrap_or(u128::MAX);
    if total > ENUMERATION_CAP {
        return Err(AlgebraError::TooLarge(total));
    }
    Ok(())
}

/// Calls `f` on every extension of `val` to `vars`; stops early when `f` returns false.
fn for_all(
    alg: &FiniteLEAlgebra,
    vars: &[String],
    val: &mut Valuation,
    f: &mut dyn FnMut(&Valuation) -> Result<bool, AlgebraError>,
) -> Result<bool, AlgebraError> {
    let Some((v, rest)) = vars.split_first() else {
        return f(val);
    };
    for a in 0..alg.size {
        val.insert(v.clone(), a);
        if !for_all(alg, rest, val, f)? {
            val.remove(v);
            return Ok(false);
        }
    }
    val.remove(v);
    Ok(true)
}

pub fn axiom_valid(ineq: &Inequality, alg: &FiniteLEAlgebra) -> Result<bool, AlgebraError> {
    let vars = ineq.atoms();
    check_budget(alg.size, vars.len())?;
    for_all(alg, &vars, &mut Valuation::new(), &mut |v| alg.holds(ineq, v))
}

fn free_vars(c: &Clause) -> Vec<String> {
    let mut bound: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    fn go(c: &Clause, bound: &mut BTreeSet<String>, out: &mut Vec<String>) {
        let added: Vec<String> = c
            .noms
            .iter()
            .map(|j| format!("@{j}"))
            .chain(c.conoms.iter().map(|m| format!("%{m}")))
            .filter(|k| bound.insert(k.clone()))
            .collect();
        let mut leaf = |f: &Formula| {
            fn walk(f: &Formula, bound: &BTreeSet<String>, out: &mut Vec<String>) {
                if let Some(k) = var_name(f) {
                    if !bound.contains(&k) && !out.contains(&k) {
                        out.push(k);
                    }
                }
                for ch in f.children() {
                    walk(ch, bound, out);
                }
            }
            walk(f, bound, out);
        };
        for i in &c.ineqs {
            leaf(&i.lhs);
            leaf(&i.rhs);
        }
        leaf(&c.consequent.lhs);
        leaf(&c.consequent.rhs);
        for sub in &c.clauses {
            go(sub, bound, out);
        }
        for k in added {
            bound.remove(&k);
        }
    }
    go(c, &mut bound, &mut out);
    out
}

fn clause_holds(c: &Clause, alg: &FiniteLEAlgebra, val: &mut Valuation) -> Result<bool, AlgebraError> {
    let vars: Vec<String> = c
        .noms
        .iter()
        .map(|j| format!("@{j}"))
        .chain(c.conoms.iter().map(|m| format!("%{m}")))
        .collect();
    let saved: Vec<(String, Option<usize>)> = vars.iter().map(|v| (v.clone(), val.get(v).copied())).collect();
    let mut inner = val.clone();
    let r = for_all(alg, &vars, &mut inner, &mut |v| {
        for i in &c.ineqs {
            if !alg.holds(i, v)? {
                return Ok(true);
            }
        }
        let mut v2 = v.clone();
        for sub in &c.clauses {
            if !clause_holds(sub, alg, &mut v2)? {
                return Ok(true);
            }
        }
        alg.holds(&c.consequent, v)
    });
    for (k, old) in saved {
        match old {
            Some(a) => {
                val.insert(k, a);
            }
            None => {
                val.remove(&k);
            }
        }
    }
    r
}

/// Validity of a clause, with its free atoms and variables universally quantified.
pub fn clause_valid(c: &Clause, alg: &FiniteLEAlgebra) -> Result<bool, AlgebraError> {
    let free = free_vars(c);
    let binders = max_binders(c);
    check_budget(alg.size, free.len() + binders)?;
    for_all(alg, &free, &mut Valuation::new(), &mut |v| {
        let mut v = v.clone();
        clause_holds(c, alg, &mut v)
    })
}

/// Largest number of variables bound along one nesting path.
fn max_binders(c: &Clause) -> usize {
    c.noms.len() + c.conoms.len() + c.clauses.iter().map(max_binders).max().unwrap_or(0)
}

/// Dedekind-MacNeille completion of a strict order on `k` points.
fn completion(k: usize, lt: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let le = |a: usize, b: usize| a == b || lt[a][b];
    let upper = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
        (0..k).filter(|&u| set.iter().all(|&x| le(x, u))).collect()
    };
    let lower = |set: &BTreeSet<usize>| -> BTreeSet<usize> {
        (0..k).filter(|&l| set.iter().all(|&x| le(l, x))).collect()
    };
    let mut cuts: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0u32..(1 << k) {
        let s: BTreeSet<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
        let c = lower(&upper(&s));
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_by_key(|c| (c.len(), c.iter().copied().collect::<Vec<_>>()));
    cuts.iter()
        .map(|a| cuts.iter().map(|b| a.is_subset(b)).collect())
        .collect()
}

fn random_lattice(rng: &mut ChaCha8Rng, max_size: usize) -> FiniteLEAlgebra {
    loop {
        let k = rng.gen_range(0..=max_size);
        let mut lt = vec![vec![false; k]; k];
        let density: f64 = rng.gen_range(0.0..1.0);
        for a in 0..k {
            for b in (a + 1)..k {
                lt[a][b] = rng.gen_bool(density);
            }
        }
        for m in 0..k {
            for a in 0..k {
                for b in 0..k {
                    if lt[a][m] && lt[m][b] {
                        lt[a][b] = true;
                    }
                }
            }
        }
        let leq = completion(k, &lt);
        if leq.len() <= max_size.max(1) {
            return FiniteLEAlgebra::from_order(leq).expect("completions are lattices");
        }
    }
}

/// A random normal operator of the given family and order-type, built as a join
/// (for F) or meet (for G) of step maps.
fn random_operator(
    rng: &mut ChaCha8Rng,
    alg: &FiniteLEAlgebra,
    family: Family,
    ot: &[Polarity],
) -> OpTable {
    let n = alg.size;
    let arity = ot.len();
    let unit = match family {
        Family::F => alg.bot,
        Family::G => alg.top,
    };
    let mut values = vec![unit; n.pow(arity as u32)];
    if arity == 0 {
        values[0] = rng.gen_range(0..n);
        return OpTable { arity, values };
    }
    let steps = rng.gen_range(0..=3);
    for _ in 0..steps {
        let thresholds: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..n)).collect();
        let b = rng.gen_range(0..n);
        for (idx, args) in tuples(n, arity).enumerate() {
            // F: b when every argument escapes its threshold from below (ε=1) or above (∂)
            // G: b when every argument escapes its threshold from above (ε=1) or below (∂)
            let fires = args.iter().zip(&thresholds).zip(ot).all(|((&x, &a), &e)| match family {
                Family::F => !alg.le_e(x, a, e),
                Family::G => !alg.le_e(a, x, e),
            });
            if fires {
                values[idx] = match family {
                    Family::F => alg.join[values[idx]][b],
                    Family::G => alg.meet[values[idx]][b],
                };
            }
        }
    }
    OpTable { arity, values }
}

pub fn random_algebra(rng: &mut ChaCha8Rng, sig: &Signature, max_size: usize) -> FiniteLEAlgebra {
    let mut alg = random_lattice(rng, max_size);
    for p in &sig.primitives {
        let t = random_operator(rng, &alg, p.family, &p.order_type.0);
        alg.ops.insert(p.name.clone(), t);
    }
    alg.complete_residuals(sig).expect("primitive tables present");
    alg
}

/// Deterministic stream of `count` random algebras of size at most `max_size`.
pub fn enumerate_algebras(
    sig: &Signature,
    max_size: usize,
    seed: u64,
    count: usize,
) -> impl Iterator<Item = FiniteLEAlgebra> + '_ {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(move |_| random_algebra(&mut rng, sig, max_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alba::parse_clause;
    use crate::syntax::parse_inequality;
    use crate::syntax::tests::sig;

    fn chain2(s: &Signature, tables: &[(&str, Vec<usize>)]) -> FiniteLEAlgebra {
        let mut a = FiniteLEAlgebra::from_order(vec![vec![true, true], vec![false, true]]).unwrap();
        for (n, v) in tables {
            let arity = s.get(n).unwrap().arity();
            a.ops.insert(n.to_string(), OpTable { arity, values: v.clone() });
        }
        a.complete_residuals(s).unwrap();
        a
    }

    fn identity_chain(s: &Signature) -> FiniteLEAlgebra {
        chain2(
            s,
            &[
                ("dia", vec![0, 1]),
                ("box", vec![0, 1]),
                ("o", vec![0, 0, 0, 1]),
                ("star", vec![0, 1, 1, 1]),
                ("tri", vec![1, 0]),
            ],
        )
    }

    #[test]
    fn identity_tables() {
        let s = sig();
        let a = identity_chain(&s);
        assert!(a.validate(&s).is_empty(), "{:?}", a.validate(&s));
        let f = crate::syntax::parse_formula("dia(box(p))", &s).unwrap();
        let v: Valuation = [("p".to_string(), 1)].into();
        assert_eq!(a.evaluate(&f, &v).unwrap(), 1);
        let i = parse_inequality("dia(box(p)) <= box(dia(box(p)))", &s).unwrap();
        assert!(axiom_valid(&i, &a).unwrap());
    }

    #[test]
    fn constant_star_falsifies() {
        let s = sig();
        let a = chain2(
            &s,
            &[
                ("dia", vec![0, 1]),
                ("box", vec![0, 1]),
                ("o", vec![0, 0, 0, 0]),
                ("star", vec![1, 1, 1, 1]),
                ("tri", vec![1, 0]),
            ],
        );
        assert!(a.validate(&s).is_empty());
        let i = parse_inequality("dia(p) star p <= p", &s).unwrap();
        assert!(!axiom_valid(&i, &a).unwrap());
    }

    #[test]
    fn unmapped_atom() {
        let s = sig();
        let a = identity_chain(&s);
        assert_eq!(
            a.evaluate(&Formula::atom("q"), &Valuation::new()),
            Err(AlgebraError::Unmapped("q".into()))
        );
    }

    #[test]
    fn trivial_clause() {
        let s = sig();
        let c = parse_clause("forall @j %m (@j <= %m => @j <= %m)", &s).unwrap();
        for a in enumerate_algebras(&s, 4, 3, 20) {
            assert!(clause_valid(&c, &a).unwrap());
        }
    }

    #[test]
    fn generated_algebras_are_valid() {
        let s = sig();
        for a in enumerate_algebras(&s, 5, 11, 60) {
            let errs = a.validate(&s);
            assert!(errs.is_empty(), "{errs:?}");
        }
    }

    #[test]
    fn deterministic_stream() {
        let s = sig();
        let a: Vec<_> = enumerate_algebras(&s, 4, 5, 10).collect();
        let b: Vec<_> = enumerate_algebras(&s, 4, 5, 10).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn two_chain_appears() {
        let s = sig();
        assert!(enumerate_algebras(&s, 2, 1, 50).any(|a| a.size == 2));
    }

    #[test]
    fn json_round_trip() {
        let s = sig();
        let a = enumerate_algebras(&s, 4, 9, 1).next().unwrap();
        let back = FiniteLEAlgebra::from_json(&a.to_json(&s), &s).unwrap();
        assert_eq!(a, back);
    }
}
