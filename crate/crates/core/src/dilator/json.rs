//! The dilator file format.
//!
//! Shapes and table posets must be given in canonical form. An action entry
//! lists the values of a bijective quasi-embedding from the shape of `from`
//! onto the shape of `to`; identities are implied.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CodedDilator, DilatorBuilder, Origin, TableKeySpec, TokenPayload};
use crate::error::{Error, Result};
use crate::orders::{bijective_quasi_embeddings, CanonicalPoset, FinPoset, PosetFile, QeMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilatorFile {
    pub n_max: usize,
    pub trace: Vec<TokenEntry>,
    #[serde(default)]
    pub action: Vec<ActionEntry>,
    #[serde(default)]
    pub table: Vec<TableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenEntry {
    pub id: String,
    pub shape: PosetFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub q: Vec<usize>,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub d: PosetFile,
    pub s: Vec<usize>,
    pub sigma: String,
    pub t: Vec<usize>,
    pub tau: String,
    pub leq: bool,
}

fn canonical(p: &PosetFile, what: &str) -> Result<CanonicalPoset> {
    let p = FinPoset::try_from(p)?;
    CanonicalPoset::from_canonical(p).map_err(|_| Error::Structural(format!("{what} is not in canonical form")))
}

/// Builds a dilator from its file form.
pub fn from_file(name: impl Into<String>, file: &DilatorFile) -> Result<CodedDilator> {
    let mut b = DilatorBuilder::new(name, file.n_max, Origin::File);
    let mut shapes = std::collections::HashMap::new();
    for tok in &file.trace {
        let shape = canonical(&tok.shape, &format!("shape of token {:?}", tok.id))?;
        shapes.insert(tok.id.clone(), shape.clone());
        b.push_token(tok.id.clone(), shape, TokenPayload::Opaque);
    }
    for a in &file.action {
        let to = shapes
            .get(&a.to)
            .ok_or_else(|| Error::Structural(format!("unknown token id {:?}", a.to)))?;
        b.action_entry(
            a.from.clone(),
            QeMap {
                to: to.clone(),
                map: a.q.clone(),
            },
            a.to.clone(),
        );
    }
    for e in &file.table {
        b.table_entry(
            TableKeySpec {
                d: canonical(&e.d, "table poset")?,
                s: e.s.clone(),
                sigma: e.sigma.clone(),
                t: e.t.clone(),
                tau: e.tau.clone(),
            },
            e.leq,
        );
    }
    b.build()
}

/// Parses a dilator file.
pub fn load_json(name: impl Into<String>, text: &str) -> Result<CodedDilator> {
    let file: DilatorFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    from_file(name, &file)
}

/// The file form of `d`: every non-identity action entry and the true table
/// entries, in a deterministic order. Fails if some action is undefined.
pub fn to_file(d: &CodedDilator) -> Result<DilatorFile> {
    let trace = d
        .trace()
        .iter()
        .map(|t| TokenEntry {
            id: t.id.clone(),
            shape: PosetFile::from(t.shape.poset()),
        })
        .collect();
    let mut action = Vec::new();
    for (i, tok) in d.trace().iter().enumerate() {
        for q in bijective_quasi_embeddings(&tok.shape).iter() {
            if q.to == tok.shape && q.map.iter().enumerate().all(|(a, &b)| a == b) {
                continue;
            }
            let to = d.act(i as u32, q)?;
            action.push(ActionEntry {
                q: q.map.clone(),
                from: tok.id.clone(),
                to: d.token_id(to).to_string(),
            });
        }
    }
    let mut table = Vec::new();
    d.for_each_key(usize::MAX, &mut |_, key| {
        if d.table_value(key) {
            let k = d.key_spec(key);
            table.push(TableEntry {
                d: PosetFile::from(k.d.poset()),
                s: k.s,
                sigma: k.sigma,
                t: k.t,
                tau: k.tau,
                leq: true,
            });
        }
        Ok(())
    })?;
    Ok(DilatorFile {
        n_max: d.n_max(),
        trace,
        action,
        table,
    })
}

pub fn export_json(d: &CodedDilator) -> Result<String> {
    let file = to_file(d)?;
    Ok(serde_json::to_string_pretty(&file).expect("dilator file serializes"))
}

/// A built-in name such as `seq:3`, or the path of a dilator file.
pub fn resolve(spec: &str) -> Result<Arc<CodedDilator>> {
    const KINDS: [&str; 5] = ["seq", "prod", "wz", "prime", "fixture"];
    if let Some((kind, _)) = spec.split_once(':') {
        if KINDS.contains(&kind) {
            return super::parse_builtin(spec);
        }
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("cannot read {spec:?}: {e}")))?;
    Ok(Arc::new(load_json(spec, &text)?))
}
