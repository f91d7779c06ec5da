//! LE-signatures: connective families, order-types and the residual closure.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Monotonicity of one coordinate: `Pos` is 1 (monotone), `Neg` is ∂ (antitone).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn dual(self) -> Polarity {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }

    /// `self` composed with `other`: flips iff exactly one of them is ∂.
    pub fn compose(self, other: Polarity) -> Polarity {
        if other == Polarity::Pos {
            self
        } else {
            self.dual()
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarity::Pos => write!(f, "1"),
            Polarity::Neg => write!(f, "d"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderType(pub Vec<Polarity>);

impl OrderType {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn dual(&self) -> OrderType {
        OrderType(self.0.iter().map(|e| e.dual()).collect())
    }

    pub fn get(&self, i: usize) -> Polarity {
        self.0[i]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F,
    G,
}

impl Family {
    pub fn dual(self) -> Family {
        match self {
            Family::F => Family::G,
            Family::G => Family::F,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    Primitive,
    /// Residual of `parent` in coordinate `coord` (0-based).
    Residual { parent: String, coord: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub family: Family,
    pub order_type: OrderType,
    pub origin: Origin,
    /// Name of the residual in each coordinate; empty until the signature is closed.
    pub residuals: Vec<String>,
}

impl Connective {
    pub fn arity(&self) -> usize {
        self.order_type.arity()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate connective name `{0}`")]
    Duplicate(String),
    #[error("connective `{name}`: arity {arity} but order-type has {len} entries")]
    ArityMismatch { name: String, arity: usize, len: usize },
    #[error("connective `{name}`: alias table has {len} entries for arity {arity}")]
    AliasMismatch { name: String, arity: usize, len: usize },
    #[error("invalid connective name `{0}`")]
    BadName(String),
    #[error("unknown family `{0}`")]
    BadFamily(String),
    #[error("bad order-type entry `{0}`")]
    BadOrderEntry(String),
    #[error("signature file: {0}")]
    Json(String),
}

/// A diagnostic produced by `validate_signature`, with a path to the offending item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Residual order-type of `h` in coordinate `i`.
pub fn residual_order_type(h: &OrderType, i: usize) -> OrderType {
    let ei = h.get(i);
    OrderType(
        (0..h.arity())
            .map(|j| {
                if j == i {
                    ei
                } else {
                    h.get(j).compose(ei.dual())
                }
            })
            .collect(),
    )
}

/// Family of the residual of a connective of family `fam` in a coordinate of polarity `e`.
pub fn residual_family(fam: Family, e: Polarity) -> Family {
    match e {
        Polarity::Pos => fam.dual(),
        Polarity::Neg => fam,
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

const RESERVED: &[&str] = &["top", "bot"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveSpec {
    pub name: String,
    pub family: Family,
    pub order_type: OrderType,
    pub aliases: Vec<Option<String>>,
}

/// A signature: the primitive connectives as declared plus, once closed, all residuals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub name: String,
    pub primitives: Vec<PrimitiveSpec>,
    pub connectives: Vec<Connective>,
    index: HashMap<String, usize>,
}

impl Signature {
    /// Builds an unclosed signature holding only the primitives.
    pub fn new(name: &str, primitives: Vec<PrimitiveSpec>) -> Result<Signature, SignatureError> {
        let mut sig = Signature {
            name: name.to_string(),
            primitives: Vec::new(),
            connectives: Vec::new(),
            index: HashMap::new(),
        };
        for p in primitives {
            if !is_identifier(&p.name) || RESERVED.contains(&p.name.as_str()) {
                return Err(SignatureError::BadName(p.name));
            }
            if p.aliases.len() != p.order_type.arity() && !p.aliases.is_empty() {
                return Err(SignatureError::AliasMismatch {
                    name: p.name,
                    arity: p.order_type.arity(),
                    len: p.aliases.len(),
                });
            }
            for a in p.aliases.iter().flatten() {
                if !is_identifier(a) || RESERVED.contains(&a.as_str()) {
                    return Err(SignatureError::BadName(a.clone()));
                }
            }
            sig.push(Connective {
                name: p.name.clone(),
                family: p.family,
                order_type: p.order_type.clone(),
                origin: Origin::Primitive,
                residuals: Vec::new(),
            })?;
            sig.primitives.push(p);
        }
        Ok(sig)
    }

    /// Convenience constructor: `(name, family, order-type, aliases)`.
    pub fn build(
        name: &str,
        prims: &[(&str, Family, &[Polarity], &[Option<&str>])],
    ) -> Result<Signature, SignatureError> {
        let specs = prims
            .iter()
            .map(|(n, fam, ot, al)| PrimitiveSpec {
                name: n.to_string(),
                family: *fam,
                order_type: OrderType(ot.to_vec()),
                aliases: al.iter().map(|a| a.map(|s| s.to_string())).collect(),
            })
            .collect();
        close_under_residuals(&Signature::new(name, specs)?)
    }

    fn push(&mut self, c: Connective) -> Result<(), SignatureError> {
        if self.index.contains_key(&c.name) {
            return Err(SignatureError::Duplicate(c.name));
        }
        self.index.insert(c.name.clone(), self.connectives.len());
        self.connectives.push(c);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.index.get(name).map(|&i| &self.connectives[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn is_closed(&self) -> bool {
        self.connectives
            .iter()
            .all(|c| c.residuals.len() == c.arity())
    }

    /// Residual of `name` in coordinate `i`; panics on an unclosed signature.
    pub fn residual(&self, name: &str, i: usize) -> &Connective {
        let c = self.get(name).expect("unknown connective");
        self.get(&c.residuals[i]).expect("unclosed signature")
    }

    /// Drops a connective by name; meant for building malformed signatures in tests.
    pub fn remove(&mut self, name: &str) {
        self.connectives.retain(|c| c.name != name);
        self.reindex();
    }

    pub fn reindex(&mut self) {
        self.index = self
            .connectives
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.clone(), i))
            .collect();
    }

    /// Serializes the primitives in the canonical signature-file layout.
    pub fn to_json(&self) -> String {
        let file = SignatureFile {
            name: self.name.clone(),
            connectives: self
                .primitives
                .iter()
                .map(|p| ConnectiveEntry {
                    name: p.name.clone(),
                    family: match p.family {
                        Family::F => "F".into(),
                        Family::G => "G".into(),
                    },
                    arity: p.order_type.arity(),
                    order_type: p
                        .order_type
                        .0
                        .iter()
                        .map(|e| match e {
                            Polarity::Pos => OrderEntry::Num(1),
                            Polarity::Neg => OrderEntry::Str("d".into()),
                        })
                        .collect(),
                    aliases: if p.aliases.iter().all(|a| a.is_none()) {
                        None
                    } else {
                        Some(p.aliases.clone())
                    },
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("serializable");
        s.push('\n');
        s
    }

    /// Parses a signature file and closes it under residuals.
    pub fn from_json(text: &str) -> Result<Signature, SignatureError> {
        let file: SignatureFile =
            serde_json::from_str(text).map_err(|e| SignatureError::Json(e.to_string()))?;
        let mut prims = Vec::new();
        for c in file.connectives {
            let family = match c.family.as_str() {
                "F" => Family::F,
                "G" => Family::G,
                other => return Err(SignatureError::BadFamily(other.to_string())),
            };
            let mut ot = Vec::new();
            for e in &c.order_type {
                ot.push(match e {
                    OrderEntry::Num(1) => Polarity::Pos,
                    OrderEntry::Str(s) if s == "d" => Polarity::Neg,
                    OrderEntry::Num(n) => return Err(SignatureError::BadOrderEntry(n.to_string())),
                    OrderEntry::Str(s) => return Err(SignatureError::BadOrderEntry(s.clone())),
                });
            }
            if ot.len() != c.arity {
                return Err(SignatureError::ArityMismatch {
                    name: c.name,
                    arity: c.arity,
                    len: ot.len(),
                });
            }
            prims.push(PrimitiveSpec {
                name: c.name,
                family,
                order_type: OrderType(ot),
                aliases: c.aliases.unwrap_or_default(),
            });
        }
        close_under_residuals(&Signature::new(&file.name, prims)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SignatureFile {
    name: String,
    connectives: Vec<ConnectiveEntry>,
}

#[derive(Serialize, Deserialize)]
struct ConnectiveEntry {
    name: String,
    family: String,
    arity: usize,
    order_type: Vec<OrderEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aliases: Option<Vec<Option<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OrderEntry {
    Num(u8),
    Str(String),
}

/// Closes the primitives of `sig` under residuals in every coordinate.
///
/// The residuals of an n-ary primitive are indexed by permutations of its n+1
/// positions (output plus arguments); taking the residual in coordinate k swaps
/// the output with argument k. Two residual paths reaching the same permutation
/// denote the same connective, so each primitive contributes at most (n+1)!
/// connectives, named after the first path found breadth-first.
pub fn close_under_residuals(sig: &Signature) -> Result<Signature, SignatureError> {
    let mut out = Signature {
        name: sig.name.clone(),
        primitives: sig.primitives.clone(),
        connectives: Vec::new(),
        index: HashMap::new(),
    };
    for p in &sig.primitives {
        let n = p.order_type.arity();
        let identity: Vec<usize> = (0..=n).collect();
        let mut names: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut local: Vec<Connective> = Vec::new();
        names.insert(identity.clone(), 0);
        local.push(Connective {
            name: p.name.clone(),
            family: p.family,
            order_type: p.order_type.clone(),
            origin: Origin::Primitive,
            residuals: vec![String::new(); n],
        });
        queue.push_back(identity);
        while let Some(perm) = queue.pop_front() {
            let me = names[&perm];
            for k in 0..n {
                let mut next = perm.clone();
                next.swap(0, k + 1);
                let idx = match names.get(&next) {
                    Some(&idx) => idx,
                    None => {
                        let parent = &local[me];
                        let family =
                            residual_family(parent.family, parent.order_type.get(k));
                        let alias = if me == 0 {
                            p.aliases.get(k).cloned().flatten()
                        } else {
                            None
                        };
                        let name = alias.unwrap_or_else(|| {
                            let tag = match parent.family {
                                Family::F => "rres",
                                Family::G => "lres",
                            };
                            format!("{}.{}.{}", parent.name, tag, k + 1)
                        });
                        let c = Connective {
                            name,
                            family,
                            order_type: residual_order_type(&parent.order_type, k),
                            origin: Origin::Residual {
                                parent: parent.name.clone(),
                                coord: k,
                            },
                            residuals: vec![String::new(); n],
                        };
                        local.push(c);
                        let idx = local.len() - 1;
                        names.insert(next.clone(), idx);
                        queue.push_back(next);
                        idx
                    }
                };
                let rname = local[idx].name.clone();
                local[me].residuals[k] = rname;
            }
        }
        for c in local {
            out.push(c)?;
        }
    }
    Ok(out)
}

/// Reports every violated invariant; empty iff the signature is closed and well-formed.
pub fn validate_signature(sig: &Signature) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for c in &sig.connectives {
        *seen.entry(c.name.as_str()).or_default() += 1;
    }
    let mut dups: Vec<&&str> = seen.iter().filter(|(_, &n)| n > 1).map(|(k, _)| k).collect();
    dups.sort();
    for d in dups {
        diags.push(Diagnostic {
            path: format!("connectives.{d}"),
            message: format!("duplicate name `{d}`"),
        });
    }
    // A residual whose own data disagrees with its parent is blamed once, and
    // links touching it are not re-reported.
    let mut blamed: Vec<&str> = Vec::new();
    for c in &sig.connectives {
        let Origin::Residual { parent, coord } = &c.origin else { continue };
        let path = format!("connectives.{}", c.name);
        let Some(p) = sig.get(parent) else {
            diags.push(Diagnostic {
                path,
                message: format!("unknown parent `{parent}`"),
            });
            blamed.push(&c.name);
            continue;
        };
        if *coord >= p.arity() || p.arity() != c.arity() {
            diags.push(Diagnostic {
                path,
                message: format!("coordinate {} out of range for `{parent}`", coord + 1),
            });
            blamed.push(&c.name);
            continue;
        }
        let want_family = residual_family(p.family, p.order_type.get(*coord));
        if c.family != want_family {
            diags.push(Diagnostic {
                path: format!("{path}.family"),
                message: format!("family {:?}, expected {:?}", c.family, want_family),
            });
            blamed.push(&c.name);
        }
        let want = residual_order_type(&p.order_type, *coord);
        for j in 0..c.arity() {
            if c.order_type.get(j) != want.get(j) {
                diags.push(Diagnostic {
                    path: format!("{path}.order_type[{}]", j + 1),
                    message: format!(
                        "coordinate {} has order {}, expected {}",
                        j + 1,
                        c.order_type.get(j),
                        want.get(j)
                    ),
                });
                blamed.push(&c.name);
            }
        }
    }
    for c in &sig.connectives {
        let path = format!("connectives.{}", c.name);
        if !is_identifier(&c.name) || RESERVED.contains(&c.name.as_str()) {
            diags.push(Diagnostic {
                path: path.clone(),
                message: "invalid name".into(),
            });
        }
        if c.residuals.len() != c.arity() {
            diags.push(Diagnostic {
                path: path.clone(),
                message: format!(
                    "{} residual links for arity {}",
                    c.residuals.len(),
                    c.arity()
                ),
            });
            continue;
        }
        for (i, rname) in c.residuals.iter().enumerate() {
            let rpath = format!("{path}.residual[{}]", i + 1);
            let Some(r) = sig.get(rname) else {
                diags.push(Diagnostic {
                    path: rpath,
                    message: format!("missing residual `{rname}`"),
                });
                continue;
            };
            if blamed.contains(&r.name.as_str()) || blamed.contains(&c.name.as_str()) {
                continue;
            }
            let want_family = residual_family(c.family, c.order_type.get(i));
            if r.family != want_family {
                diags.push(Diagnostic {
                    path: rpath.clone(),
                    message: format!("residual `{}` has family {:?}, expected {:?}", r.name, r.family, want_family),
                });
            }
            if r.arity() != c.arity() {
                diags.push(Diagnostic {
                    path: rpath.clone(),
                    message: format!("residual `{}` has arity {}", r.name, r.arity()),
                });
                continue;
            }
            let want = residual_order_type(&c.order_type, i);
            for j in 0..c.arity() {
                if r.order_type.get(j) != want.get(j) {
                    diags.push(Diagnostic {
                        path: format!("{rpath}.order_type[{}]", j + 1),
                        message: format!(
                            "residual `{}` coordinate {} has order {}, expected {}",
                            r.name,
                            j + 1,
                            r.order_type.get(j),
                            want.get(j)
                        ),
                    });
                }
            }
            if r.residuals.get(i) != Some(&c.name) {
                diags.push(Diagnostic {
                    path: rpath,
                    message: format!("residual `{}` does not link back to `{}`", r.name, c.name),
                });
            }
        }
    }
    diags
}

#[cfg(test)]
mod tests {
    use super::*;
    use Family::*;
    use Polarity::*;

    fn modal() -> Signature {
        Signature::build(
            "modal",
            &[
                ("dia", F, &[Pos], &[Some("bbox")]),
                ("box", G, &[Pos], &[Some("bdia")]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn binary_order_types() {
        let sig = Signature::build(
            "t",
            &[("f", F, &[Pos, Neg], &[]), ("g", G, &[Neg, Pos], &[])],
        )
        .unwrap();
        let ot = |i: usize, name: &str| sig.residual(name, i).order_type.clone();
        assert_eq!(ot(0, "f"), OrderType(vec![Pos, Pos]));
        assert_eq!(ot(1, "f"), OrderType(vec![Pos, Neg]));
        assert_eq!(ot(0, "g"), OrderType(vec![Neg, Pos]));
        assert_eq!(ot(1, "g"), OrderType(vec![Pos, Pos]));
        assert_eq!(sig.residual("f", 0).family, G);
        assert_eq!(sig.residual("f", 1).family, F);
        assert_eq!(sig.residual("g", 0).family, G);
        assert_eq!(sig.residual("g", 1).family, F);
    }

    #[test]
    fn unary_residual_and_aliases() {
        let sig = modal();
        let r = sig.residual("dia", 0);
        assert_eq!(r.name, "bbox");
        assert_eq!(r.family, G);
        assert_eq!(r.order_type, OrderType(vec![Pos]));
        assert_eq!(sig.residual("bbox", 0).name, "dia");
        assert_eq!(sig.connectives.len(), 4);
        assert!(validate_signature(&sig).is_empty());
    }

    #[test]
    fn binary_closure_has_six_members() {
        let sig = Signature::build("t", &[("star", G, &[Pos, Pos], &[])]).unwrap();
        assert_eq!(sig.connectives.len(), 6);
        assert!(validate_signature(&sig).is_empty());
        let l1 = sig.residual("star", 0);
        assert_eq!(l1.name, "star.lres.1");
        assert_eq!(l1.family, F);
        assert_eq!(l1.order_type, OrderType(vec![Pos, Neg]));
        let l2 = sig.residual("star", 1);
        assert_eq!(l2.order_type, OrderType(vec![Neg, Pos]));
    }

    #[test]
    fn closure_is_idempotent() {
        let sig = Signature::build(
            "t",
            &[("o", F, &[Pos, Pos], &[]), ("tri", F, &[Neg], &[Some("btri")])],
        )
        .unwrap();
        let again = close_under_residuals(&sig).unwrap();
        assert_eq!(sig, again);
    }

    #[test]
    fn wrong_order_type_is_reported() {
        let mut sig = modal();
        let i = sig.connectives.iter().position(|c| c.name == "bbox").unwrap();
        sig.connectives[i].order_type = OrderType(vec![Neg]);
        let d = validate_signature(&sig);
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!(d[0].path, "connectives.bbox.order_type[1]");
    }

    #[test]
    fn duplicate_names_rejected() {
        let e = Signature::build(
            "t",
            &[("dia", F, &[Pos], &[]), ("dia", F, &[Pos], &[])],
        );
        assert_eq!(e, Err(SignatureError::Duplicate("dia".into())));
        let mut sig = modal();
        let c = sig.connectives[0].clone();
        sig.connectives.push(c);
        let d = validate_signature(&sig);
        assert!(d.iter().any(|d| d.message.contains("duplicate name `dia`")));
    }

    #[test]
    fn missing_residual_reported() {
        let mut sig = modal();
        sig.remove("bbox");
        assert!(!validate_signature(&sig).is_empty());
    }

    #[test]
    fn nullary_has_no_residuals() {
        let sig = Signature::build("t", &[("c", F, &[], &[])]).unwrap();
        assert_eq!(sig.connectives.len(), 1);
        assert!(validate_signature(&sig).is_empty());
    }

    #[test]
    fn reserved_names_rejected() {
        assert!(Signature::build("t", &[("top", F, &[], &[])]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sig = modal();
        let text = sig.to_json();
        let back = Signature::from_json(&text).unwrap();
        assert_eq!(back, sig);
        assert_eq!(back.to_json(), text);
    }
}
