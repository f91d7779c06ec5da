//! The bundled example corpus: axioms, clauses, rules, derivations and mutants.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde_json::Value;

use inception::alba::{parse_clause, Clause};
use inception::checker::{parse_path, Calculus, Derivation, NodePath};
use inception::rulegen::RulesFile;
use inception::signature::{Polarity, Signature};
use inception::syntax::{parse_axiom_file, parse_inequality, Inequality};

/// Environment variable overriding the corpus location.
pub const CORPUS_ENV: &str = "INCEPTION_CORPUS";

pub fn default_root() -> PathBuf {
    match std::env::var_os(CORPUS_ENV) {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
    }
}

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_signature(path: &Path) -> Result<Signature> {
    Signature::from_json(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// Reads inequalities from a file, or parses the argument itself when no such file exists.
pub fn load_axioms(arg: &str, sig: &Signature) -> Result<Vec<Inequality>> {
    let p = Path::new(arg);
    if p.is_file() {
        return parse_axiom_file(&read(p)?, sig).map_err(|e| anyhow!("{}: {e}", p.display()));
    }
    Ok(vec![parse_inequality(arg, sig).map_err(|e| anyhow!("`{arg}`: {e}"))?])
}

/// Expected figures recorded next to an example.
#[derive(Clone, Debug)]
pub struct Meta {
    pub depth: usize,
    pub epsilon: Vec<(String, Polarity)>,
    pub analytic: bool,
}

#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub dir: PathBuf,
    pub axiom: Inequality,
    pub meta: Meta,
}

impl Example {
    fn file(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn has(&self, name: &str) -> bool {
        self.file(name).is_file()
    }

    pub fn clause(&self, sig: &Signature) -> Result<Option<Clause>> {
        if !self.has("clause.txt") {
            return Ok(None);
        }
        let text = read(&self.file("clause.txt"))?;
        parse_clause(text.trim(), sig)
            .map(Some)
            .map_err(|e| anyhow!("{}/clause.txt: {e}", self.name))
    }

    pub fn expected_rules(&self, sig: &Signature) -> Result<RulesFile> {
        self.rules_file("expected_rules.json", sig)
    }

    pub fn rules(&self, sig: &Signature) -> Result<RulesFile> {
        self.rules_file("rules.json", sig)
    }

    fn rules_file(&self, name: &str, sig: &Signature) -> Result<RulesFile> {
        RulesFile::from_json(&read(&self.file(name))?, sig).map_err(|e| anyhow!("{}/{name}: {e}", self.name))
    }

    pub fn calculus(&self) -> Result<Calculus> {
        Calculus::load(&self.file("calculus.json")).map_err(|e| anyhow!(e))
    }

    pub fn derivation(&self, sig: &Signature) -> Result<Option<Derivation>> {
        if !self.has("derivation.json") {
            return Ok(None);
        }
        let text = read(&self.file("derivation.json"))?;
        Derivation::from_json(&text, sig)
            .map(Some)
            .map_err(|e| anyhow!("{}/derivation.json: {e}", self.name))
    }
}

/// A corrupted derivation with the rejection it must produce.
#[derive(Clone, Debug)]
pub struct Mutant {
    pub name: String,
    pub description: String,
    pub calculus: Calculus,
    pub derivation: Derivation,
    pub expect_path: NodePath,
    pub expect_kind: String,
}

pub struct Corpus {
    pub root: PathBuf,
    pub sig: Signature,
    pub examples: Vec<Example>,
}

impl Corpus {
    pub fn load(root: &Path) -> Result<Corpus> {
        let sig = load_signature(&root.join("signatures/le.json"))?;
        let mut examples = Vec::new();
        let dir = root.join("examples");
        let mut names: Vec<PathBuf> = fs::read_dir(&dir)
            .with_context(|| format!("listing {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir())
            .collect();
        names.sort();
        for d in names {
            let name = d.file_name().unwrap().to_string_lossy().into_owned();
            let axiom_text = read(&d.join("axiom.txt"))?;
            let axiom = parse_inequality(axiom_text.trim(), &sig).map_err(|e| anyhow!("{name}/axiom.txt: {e}"))?;
            let meta = parse_meta(&read(&d.join("meta.json"))?).with_context(|| format!("{name}/meta.json"))?;
            examples.push(Example {
                name,
                dir: d,
                axiom,
                meta,
            });
        }
        Ok(Corpus {
            root: root.to_path_buf(),
            sig,
            examples,
        })
    }

    pub fn example(&self, name: &str) -> Result<&Example> {
        self.examples
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| anyhow!("no example `{name}` in {}", self.root.display()))
    }

    pub fn mutants(&self) -> Result<Vec<Mutant>> {
        let dir = self.root.join("mutants");
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .with_context(|| format!("listing {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        files.iter().map(|f| load_mutant(f)).collect()
    }
}

fn parse_meta(text: &str) -> Result<Meta> {
    let v: Value = serde_json::from_str(text)?;
    let depth = v["depth"].as_u64().ok_or_else(|| anyhow!("missing `depth`"))? as usize;
    let mut epsilon = Vec::new();
    if let Some(o) = v.get("epsilon").and_then(|o| o.as_object()) {
        for (p, e) in o {
            epsilon.push((p.clone(), parse_polarity(e.as_str().unwrap_or_default())?));
        }
    }
    Ok(Meta {
        depth,
        epsilon,
        analytic: v["analytic"].as_bool().unwrap_or(false),
    })
}

pub fn parse_polarity(s: &str) -> Result<Polarity> {
    match s {
        "1" => Ok(Polarity::Pos),
        "d" | "∂" => Ok(Polarity::Neg),
        _ => bail!("polarity must be `1` or `d`, got `{s}`"),
    }
}

fn load_mutant(file: &Path) -> Result<Mutant> {
    let ctx = || format!("mutant {}", file.display());
    let v: Value = serde_json::from_str(&read(file)?).with_context(ctx)?;
    let dir = file.parent().unwrap_or(Path::new("."));
    let rel = |key: &str| -> Result<PathBuf> {
        Ok(dir.join(v[key].as_str().ok_or_else(|| anyhow!("missing `{key}`")).with_context(ctx)?))
    };
    let calculus = Calculus::load(&rel("calculus")?).map_err(|e| anyhow!(e)).with_context(ctx)?;
    let base = Derivation::from_json(&read(&rel("base")?)?, &calculus.sig).map_err(|e| anyhow!(e)).with_context(ctx)?;
    let mut derivation = base;
    for edit in v["edits"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        derivation = apply_edit(&derivation, edit, &calculus.sig).with_context(ctx)?;
    }
    let expect = &v["expect"];
    let path_text = expect["path"].as_str().ok_or_else(|| anyhow!("missing expect.path")).with_context(ctx)?;
    Ok(Mutant {
        name: file.file_stem().unwrap().to_string_lossy().into_owned(),
        description: v["description"].as_str().unwrap_or_default().to_string(),
        calculus,
        derivation,
        expect_path: parse_path(path_text).ok_or_else(|| anyhow!("bad path `{path_text}`")).with_context(ctx)?,
        expect_kind: expect["kind"].as_str().unwrap_or_default().to_string(),
    })
}

/// Applies one edit to the subtree at `at`. Operations: `replace` (textual, on
/// the subtree's serialization), `set-rule`, `set-seq`, `drop-dreams`, `drop-premise`.
pub fn apply_edit(d: &Derivation, edit: &Value, sig: &Signature) -> Result<Derivation> {
    let at_text = edit["at"].as_str().unwrap_or("/");
    let at = parse_path(at_text).ok_or_else(|| anyhow!("bad path `{at_text}`"))?;
    let mut out = d.clone();
    let node = out.get_mut(&at).ok_or_else(|| anyhow!("no node at {at_text}"))?;
    let s = |key: &str| edit[key].as_str().ok_or_else(|| anyhow!("edit needs `{key}`"));
    match edit["op"].as_str().unwrap_or_default() {
        "replace" => {
            let text = node.to_json().replace(s("from")?, s("to")?);
            *node = Derivation::from_json(&text, sig).map_err(|e| anyhow!(e))?;
        }
        "set-rule" => node.rule = s("rule")?.to_string(),
        "set-seq" => {
            node.seq = inception::kernel::parse_sequent(s("seq")?, sig).map_err(|e| anyhow!("{e}"))?;
        }
        "drop-dreams" => node.dreams.clear(),
        "drop-premise" => {
            let i = edit["index"].as_u64().unwrap_or(1) as usize;
            if i == 0 || i > node.premises.len() {
                bail!("no premise {i} at {at_text}");
            }
            node.premises.remove(i - 1);
        }
        op => bail!("unknown edit `{op}`"),
    }
    Ok(out)
}
