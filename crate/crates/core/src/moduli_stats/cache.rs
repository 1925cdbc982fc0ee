//! Ensemble snapshots: an in-process memo plus optional versioned JSON files.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    elliptic_ensemble, genus2_ensemble, genus3_ensemble, ClassEnsemble, EnsembleEntry, FamilyInfo,
};
use crate::error::{Error, Result};

/// Bumped whenever an enumeration engine changes its output.
const ENGINE_REVISION: &str = "sweep-1";

/// Hash identifying the code that produced a snapshot.
pub fn code_version() -> String {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION"));
    h.update("/");
    h.update(ENGINE_REVISION);
    h.finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WeightJson {
    pub num: String,
    pub den: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EntryJson {
    pub coeffs: Vec<i64>,
    pub weight: WeightJson,
    pub twisted: bool,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FamilyJson {
    pub label: String,
    pub group_order: String,
    pub equations: u64,
}

/// On-disk form of a [`ClassEnsemble`].
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SnapshotJson {
    pub format: String,
    pub version: String,
    pub genus: usize,
    pub q: u64,
    pub families: Vec<FamilyJson>,
    pub entries: Vec<EntryJson>,
}

const FORMAT: &str = "weilstats-ensemble";

impl From<&ClassEnsemble> for SnapshotJson {
    fn from(e: &ClassEnsemble) -> SnapshotJson {
        SnapshotJson {
            format: FORMAT.into(),
            version: code_version(),
            genus: e.genus,
            q: e.q,
            families: e
                .families
                .iter()
                .map(|f| FamilyJson {
                    label: f.label.clone(),
                    group_order: f.group_order.to_string(),
                    equations: f.equations,
                })
                .collect(),
            entries: e
                .entries
                .iter()
                .map(|x| EntryJson {
                    coeffs: x.coeffs.clone(),
                    weight: WeightJson {
                        num: x.weight.numer().to_string(),
                        den: x.weight.denom().to_string(),
                    },
                    twisted: x.twisted,
                })
                .collect(),
        }
    }
}

fn parse_big(s: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::Cache(format!("bad integer {s:?}")))
}

impl TryFrom<SnapshotJson> for ClassEnsemble {
    type Error = Error;

    fn try_from(s: SnapshotJson) -> Result<ClassEnsemble> {
        if s.format != FORMAT {
            return Err(Error::Cache(format!("unknown format {:?}", s.format)));
        }
        if s.version != code_version() {
            return Err(Error::Cache(format!(
                "stale snapshot version {} (current {})",
                s.version,
                code_version()
            )));
        }
        let entries = s
            .entries
            .into_iter()
            .map(|x| {
                let den = parse_big(&x.weight.den)?;
                if den == BigInt::from(0) {
                    return Err(Error::Cache("zero denominator".into()));
                }
                Ok(EnsembleEntry {
                    coeffs: x.coeffs,
                    weight: BigRational::new(parse_big(&x.weight.num)?, den),
                    twisted: x.twisted,
                })
            })
            .collect::<Result<_>>()?;
        let families = s
            .families
            .into_iter()
            .map(|f| {
                Ok(FamilyInfo {
                    label: f.label,
                    group_order: parse_big(&f.group_order)?,
                    equations: f.equations,
                })
            })
            .collect::<Result<_>>()?;
        let e = ClassEnsemble {
            genus: s.genus,
            q: s.q,
            entries,
            families,
        };
        e.validate()?;
        Ok(e)
    }
}

/// Writes an ensemble snapshot.
pub fn save(e: &ClassEnsemble, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&SnapshotJson::from(e))
        .map_err(|x| Error::Cache(x.to_string()))?;
    fs::write(path, json).map_err(|x| Error::Cache(format!("{}: {x}", path.display())))
}

/// Reads an ensemble snapshot, rejecting other code versions.
pub fn load(path: &Path) -> Result<ClassEnsemble> {
    let text =
        fs::read_to_string(path).map_err(|x| Error::Cache(format!("{}: {x}", path.display())))?;
    let s: SnapshotJson = serde_json::from_str(&text).map_err(|x| Error::Cache(x.to_string()))?;
    ClassEnsemble::try_from(s)
}

/// Builds the ensemble of all curves of genus `g` over `F_q`.
pub fn build(genus: usize, q: u64) -> Result<ClassEnsemble> {
    match genus {
        1 => elliptic_ensemble(q),
        2 => genus2_ensemble(q),
        3 => genus3_ensemble(q),
        _ => Err(Error::Unsupported(format!("genus {genus}"))),
    }
}

type Memo = Mutex<HashMap<(usize, u64), Arc<ClassEnsemble>>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(Default::default)
}

/// Source of ensembles: the process memo, then an optional cache directory,
/// then a fresh sweep.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnsembleStore {
    dir: Option<PathBuf>,
}

impl EnsembleStore {
    /// Memory only.
    pub fn shared() -> &'static EnsembleStore {
        static S: EnsembleStore = EnsembleStore { dir: None };
        &S
    }

    /// Also reads and writes snapshots under `dir`.
    pub fn with_dir(dir: impl Into<PathBuf>) -> EnsembleStore {
        EnsembleStore {
            dir: Some(dir.into()),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn file(&self, genus: usize, q: u64) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("genus{genus}-q{q}.json")))
    }

    pub fn get(&self, genus: usize, q: u64) -> Result<Arc<ClassEnsemble>> {
        if let Some(e) = memo().lock().unwrap().get(&(genus, q)) {
            return Ok(e.clone());
        }
        let e = match self.file(genus, q) {
            Some(path) if path.exists() => match load(&path) {
                Ok(e) => e,
                Err(Error::Cache(_)) => self.build_and_save(genus, q, &path)?,
                Err(x) => return Err(x),
            },
            Some(path) => self.build_and_save(genus, q, &path)?,
            None => build(genus, q)?,
        };
        let e = Arc::new(e);
        Ok(memo()
            .lock()
            .unwrap()
            .entry((genus, q))
            .or_insert(e)
            .clone())
    }

    fn build_and_save(&self, genus: usize, q: u64, path: &Path) -> Result<ClassEnsemble> {
        let e = build(genus, q)?;
        if let Some(d) = &self.dir {
            fs::create_dir_all(d).map_err(|x| Error::Cache(format!("{}: {x}", d.display())))?;
        }
        save(&e, path)?;
        Ok(e)
    }
}
