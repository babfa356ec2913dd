//! The `mgf-1` document format: JSON with a schema tag, tool version, the hash
//! of the producing configuration, and a typed body.
//!
//! Floats are written in shortest round-trip form, so every value reloads
//! bit-identically.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomp::{GundyTriple, MartingalePair, PairKind};
use crate::error::{Error, Result};
use crate::search::{LogEntry, Objective, SearchConfig, SearchResult, Witness};
use crate::space::{
    AdaptedFunction, AdaptedSequence, CorpusSpec, FiltrationTree, Instance, Martingale, Sequence, TreeDescription,
};
use crate::verify::{CapsTable, ProofTrace, SuiteReport};

pub const SCHEMA: &str = "mgf-1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleDoc {
    pub tree: TreeDescription,
    pub f0: f64,
    /// `f_1, …, f_N`, one value per atom.
    pub levels: Vec<Vec<f64>>,
}

impl MartingaleDoc {
    pub fn from_martingale(f: &Martingale) -> Self {
        Self {
            tree: f.tree().description(),
            f0: f.f0(),
            levels: (1..=f.depth()).map(|k| f.level(k).values().to_vec()).collect(),
        }
    }

    pub fn to_martingale(&self) -> Result<Martingale> {
        let tree = Arc::new(FiltrationTree::build(&self.tree)?);
        self.on_tree(tree)
    }

    fn on_tree(&self, tree: Arc<FiltrationTree>) -> Result<Martingale> {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(i, v)| AdaptedFunction::new(&tree, i + 1, v.clone()))
            .collect::<Result<Vec<_>>>()?;
        Martingale::new(tree, self.f0, levels)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptedDoc {
    pub tree: TreeDescription,
    /// Term `k` lives on level `level`.
    pub level: usize,
    pub terms: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SequenceDoc {
    Martingale(MartingaleDoc),
    Adapted(AdaptedDoc),
}

impl SequenceDoc {
    pub fn from_sequence(s: &Sequence) -> Self {
        match s {
            Sequence::Martingale(m) => Self::Martingale(MartingaleDoc::from_martingale(m)),
            Sequence::Adapted(a) => Self::Adapted(AdaptedDoc {
                tree: a.tree.description(),
                level: a.terms.first().map_or(0, AdaptedFunction::level),
                terms: a.terms.iter().map(|t| t.values().to_vec()).collect(),
            }),
        }
    }

    pub fn to_sequence(&self) -> Result<Sequence> {
        match self {
            Self::Martingale(m) => Ok(Sequence::Martingale(m.to_martingale()?)),
            Self::Adapted(a) => {
                let tree = Arc::new(FiltrationTree::build(&a.tree)?);
                let terms =
                    a.terms.iter().map(|v| AdaptedFunction::new(&tree, a.level, v.clone())).collect::<Result<_>>()?;
                Ok(Sequence::Adapted(AdaptedSequence { tree, terms }))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub index: usize,
    pub sequence: SequenceDoc,
}

/// A decomposition as explicit martingales on the shared tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub kind: String,
    pub f: MartingaleDoc,
    pub lambda: Option<f64>,
    /// Named parts, in order (`g`, `h` or `alpha`, `beta`, `gamma`).
    pub parts: Vec<(String, MartingaleDoc)>,
}

impl DecompositionDoc {
    pub fn from_pair(kind: &str, f: &Martingale, pair: &MartingalePair) -> Self {
        Self {
            kind: kind.into(),
            f: MartingaleDoc::from_martingale(f),
            lambda: None,
            parts: vec![
                ("g".into(), MartingaleDoc::from_martingale(&pair.g)),
                ("h".into(), MartingaleDoc::from_martingale(&pair.h)),
            ],
        }
    }

    pub fn from_gundy(f: &Martingale, t: &GundyTriple) -> Self {
        Self {
            kind: "gundy".into(),
            f: MartingaleDoc::from_martingale(f),
            lambda: Some(t.lambda),
            parts: [("alpha", &t.alpha), ("beta", &t.beta), ("gamma", &t.gamma)]
                .into_iter()
                .map(|(n, m)| (n.to_string(), MartingaleDoc::from_martingale(m)))
                .collect(),
        }
    }

    /// Rebuilds a two-part decomposition and checks that it sums to `f`.
    pub fn to_pair(&self) -> Result<(Martingale, MartingalePair)> {
        let f = self.f.to_martingale()?;
        let [(_, g), (_, h)] = self.parts.as_slice() else {
            return Err(Error::MalformedDocument(format!("`{}` is not a two-part decomposition", self.kind)));
        };
        let kind = match self.kind.as_str() {
            "davis" => PairKind::Davis,
            "regular" => PairKind::RegularDavis,
            _ => PairKind::Custom,
        };
        let tree = Arc::clone(f.tree());
        let pair = MartingalePair::new(&f, g.on_tree(Arc::clone(&tree))?, h.on_tree(tree)?, kind)?;
        Ok((f, pair))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchDoc {
    pub config: SearchConfig,
    pub objective: Objective,
    pub value: f64,
    pub restart: usize,
    pub restart_values: Vec<f64>,
    pub log: Vec<LogEntry>,
    pub witness: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDoc {
    Martingale(MartingaleDoc),
    Pair(DecompositionDoc),
}

impl SearchDoc {
    /// `f` is the decomposed martingale for pair witnesses.
    pub fn new(config: &SearchConfig, result: &SearchResult, f: Option<&Martingale>) -> Result<Self> {
        let witness = match (&result.witness, f) {
            (Witness::Martingale(m), _) => WitnessDoc::Martingale(MartingaleDoc::from_martingale(m)),
            (Witness::Pair(p), Some(f)) => WitnessDoc::Pair(DecompositionDoc::from_pair("search", f, p)),
            (Witness::Pair(_), None) => {
                return Err(Error::InvalidParameters("pair witness needs the decomposed martingale".into()))
            }
        };
        Ok(Self {
            config: config.clone(),
            objective: result.objective,
            value: result.value,
            restart: result.restart,
            restart_values: result.restart_values.clone(),
            log: result.log.clone(),
            witness,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Body {
    Corpus { spec: CorpusSpec, instances: Vec<InstanceDoc> },
    Martingale(MartingaleDoc),
    Decomposition(DecompositionDoc),
    /// Differences that are not martingale differences, level `k` at index `k − 1`.
    Split { f: MartingaleDoc, dg: Vec<Vec<f64>>, dh: Vec<Vec<f64>> },
    Suite(SuiteReport),
    Traces { traces: Vec<ProofTrace> },
    Search(SearchDoc),
    Caps(CapsTable),
    Table { columns: Vec<String>, rows: Vec<Vec<f64>> },
}

impl Body {
    pub fn corpus(spec: &CorpusSpec, instances: &[Instance]) -> Self {
        Self::Corpus {
            spec: spec.clone(),
            instances: instances
                .iter()
                .map(|i| InstanceDoc { index: i.index, sequence: SequenceDoc::from_sequence(&i.sequence) })
                .collect(),
        }
    }

    pub fn instances(&self) -> Result<Vec<Instance>> {
        match self {
            Self::Corpus { instances, .. } => instances
                .iter()
                .map(|d| Ok(Instance { index: d.index, sequence: d.sequence.to_sequence()? }))
                .collect(),
            Self::Martingale(m) => Ok(vec![Instance { index: 0, sequence: Sequence::Martingale(m.to_martingale()?) }]),
            _ => Err(Error::MalformedDocument("document holds no martingales".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub schema: String,
    pub tool_version: String,
    pub config_hash: String,
    pub body: Body,
}

impl Document {
    pub fn new(config_hash: impl Into<String>, body: Body) -> Self {
        Self { schema: SCHEMA.into(), tool_version: TOOL_VERSION.into(), config_hash: config_hash.into(), body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialise")
    }

    /// Checks the schema tag before decoding the body.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        match value.get("schema").and_then(|s| s.as_str()) {
            Some(SCHEMA) => {}
            Some(other) => return Err(Error::SchemaMismatch { found: other.into(), expected: SCHEMA }),
            None => return Err(Error::MalformedDocument("missing `schema`".into())),
        }
        serde_json::from_value(value).map_err(|e| Error::MalformedDocument(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::MalformedDocument(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::MalformedDocument(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{davis, gundy};
    use crate::space::{corpus, GeneratorKind};

    #[test]
    fn corpus_round_trip_is_bit_identical() {
        for kind in [GeneratorKind::RandomTree, GeneratorKind::PhiFamily] {
            let spec = CorpusSpec { kind, depth: 4, max_branching: 3, skew: 0.4, count: 5, seed: 3, ..Default::default() };
            let instances = corpus(&spec).unwrap();
            let doc = Document::new("abc", Body::corpus(&spec, &instances));
            let back = Document::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.body.instances().unwrap(), instances);
        }
    }

    #[test]
    fn decompositions_round_trip() {
        let spec = CorpusSpec { kind: GeneratorKind::RandomTree, depth: 4, count: 1, seed: 8, ..Default::default() };
        let f = corpus(&spec).unwrap()[0].martingale().unwrap().clone();
        let pair = davis(&f);
        let (g, back) = DecompositionDoc::from_pair("davis", &f, &pair).to_pair().unwrap();
        assert_eq!(g, f);
        assert_eq!(back, pair);
        let t = gundy(&f, 0.5).unwrap();
        assert!(DecompositionDoc::from_gundy(&f, &t).to_pair().is_err());
    }

    #[test]
    fn schema_is_checked() {
        let doc = Document::new("", Body::Table { columns: vec!["a".into()], rows: vec![vec![1.0]] });
        let next = doc.to_json().replace("\"mgf-1\"", "\"mgf-2\"");
        assert!(matches!(Document::from_json(&next), Err(Error::SchemaMismatch { .. })));
        assert!(matches!(Document::from_json("{"), Err(Error::MalformedDocument(_))));
        assert!(matches!(Document::from_json("{\"schema\": \"mgf-1\"}"), Err(Error::MalformedDocument(_))));
    }
}
