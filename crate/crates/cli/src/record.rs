//! Run records and the JSON-lines result cache.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use cherednik_core::hilbert::{char_two_theorem_series, rational_theorem_series};
use cherednik_core::{
    baby_verma_series, compare, compute_hilbert, conjectured_hilbert, q_bracket, shape_check_t1, CMode, Comparison,
    ConjectureVariant, CongruenceData, FastEval, FastEvalReport, HilbertRequest, KernelStatus, Provenance, Series,
    ShapeReport,
};
use serde::{Deserialize, Serialize};

/// Bumped whenever the record layout or its meaning changes.
pub const FORMAT_VERSION: u32 = 1;
pub const ENGINE_HASH: &str = env!("CHEREDNIK_ENGINE_HASH");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunKey {
    pub p: u64,
    pub n: usize,
    pub t: u8,
    pub c_mode: CMode,
    /// `None` for exact runs.
    pub fast_eval: Option<FastEval>,
    pub cap: usize,
    pub format_version: u32,
}

impl RunKey {
    pub fn of(req: &HilbertRequest) -> Self {
        Self {
            p: req.p,
            n: req.n,
            t: req.t,
            c_mode: req.c,
            fast_eval: req.fast_eval,
            cap: req.cap(),
            format_version: FORMAT_VERSION,
        }
    }

    fn id(&self) -> String {
        serde_json::to_string(self).expect("key serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    /// Which formula produced `series`.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factored: Option<String>,
    /// Absent when there is nothing to compare against.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Comparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Prediction {
    pub fn agrees(&self) -> Option<bool> {
        self.comparison.as_ref().map(|c| c.equal)
    }
}

/// Both readings of the conjecture, evaluated side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjectures {
    pub as_printed: Prediction,
    pub remark_consistent: Prediction,
}

impl Conjectures {
    pub fn get(&self, v: ConjectureVariant) -> &Prediction {
        match v {
            ConjectureVariant::AsPrinted => &self.as_printed,
            ConjectureVariant::RemarkConsistent => &self.remark_consistent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub cache_hit: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub key: RunKey,
    pub engine: String,
    pub r: usize,
    pub status: KernelStatus,
    /// `dim L[d]`; only a prefix when the cap was reached.
    pub series: Vec<u64>,
    pub formatted: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factored: Option<String>,
    pub dims_l: Vec<usize>,
    pub dims_m: Vec<usize>,
    pub conjectures: Conjectures,
    pub theorem: Prediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_baby_verma: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast_eval: Option<FastEvalReport>,
    pub timing: Timing,
}

impl RunRecord {
    pub fn complete(&self) -> bool {
        matches!(self.status, KernelStatus::Complete { .. })
    }

    /// The run disagrees with the chosen conjecture variant or with a theorem.
    pub fn mismatch(&self, v: ConjectureVariant) -> bool {
        self.theorem.agrees() == Some(false) || self.conjectures.get(v).agrees() == Some(false)
    }

    /// The record without its timing, for comparisons across runs.
    pub fn untimed(&self) -> RunRecord {
        let mut r = self.clone();
        r.timing = Timing {
            wall_seconds: 0.0,
            cache_hit: false,
        };
        r
    }
}

fn predict(computed: Option<&Series>, source: String, predicted: Option<Series>, p: usize) -> Prediction {
    match predicted {
        Some(s) => Prediction {
            source,
            series: Some(s.coeffs().to_vec()),
            factored: Some(s.factored(p)),
            comparison: computed.map(|h| compare(h, &s)),
            note: None,
        },
        None => Prediction {
            source,
            series: None,
            factored: None,
            comparison: None,
            note: None,
        },
    }
}

fn with_note(mut p: Prediction, note: impl Into<String>) -> Prediction {
    p.note = Some(note.into());
    p
}

/// The proved formula covering `(p, n, t)`, if any.
pub fn theorem_for(p: usize, n: usize, t: u8) -> Option<(String, Series)> {
    match t {
        0 if n % p == 1 => Some(("[p]_z(1+(n-2)z+z^2), n = 1 mod p".into(), rational_theorem_series(n, p))),
        1 if p == 2 && n % 2 == 1 => Some((
            "(1+z)^(n-1)(1+(n-1)z^2+(n-1)z^4+z^6), p = 2, n odd".into(),
            char_two_theorem_series(n),
        )),
        1 if n % p == 0 => Some((
            "[p]_z^(n-1), p divides n".into(),
            q_bracket(p).pow(n - 1).with_provenance(Provenance::Theorem),
        )),
        _ => None,
    }
}

/// Whether the generic-`c` formulas describe this value of `c`.
fn generic_like(c: CMode, t: u8, p: u64) -> bool {
    match c {
        CMode::Generic => true,
        CMode::Value(v) => t == 0 && v % p != 0,
    }
}

pub fn compute_record(req: &HilbertRequest) -> cherednik_core::Result<RunRecord> {
    let start = Instant::now();
    let run = compute_hilbert(req)?;
    let p = req.p as usize;
    let cong = CongruenceData::new(req.n, p);
    let computed = run.series().ok();
    let series: Vec<u64> = match &computed {
        Some(h) => h.coeffs().to_vec(),
        None => run.dims_l.iter().map(|&d| d as u64).collect(),
    };
    let comparable = generic_like(req.c, req.t, req.p);
    let target = if comparable { computed.as_ref() } else { None };

    let conjecture = |v: ConjectureVariant| {
        let source = format!("conjecture, {} variant", v.name());
        match conjectured_hilbert(&cong, req.t, v) {
            Ok(s) => predict(target, source, Some(s), p),
            Err(e) => with_note(predict(None, source, None, p), format!("unavailable: {e}")),
        }
    };
    let conjectures = Conjectures {
        as_printed: conjecture(ConjectureVariant::AsPrinted),
        remark_consistent: conjecture(ConjectureVariant::RemarkConsistent),
    };

    let theorem = match theorem_for(p, req.n, req.t) {
        Some((name, s)) => predict(target, name, Some(s), p),
        None => with_note(predict(None, "none".into(), None, p), "no theorem covers this cell"),
    };
    let theorem = if comparable || theorem.series.is_none() {
        theorem
    } else {
        with_note(theorem, "formula is for generic c")
    };

    let shape = match (&computed, req.t) {
        (Some(h), 1) => Some(shape_check_t1(h, req.n, p)),
        _ => None,
    };
    let within_baby_verma = match &computed {
        Some(h) => baby_verma_series(req.n, p, req.t).ok().map(|b| h.dominated_by(&b)),
        None => None,
    };
    let formatted = Series::new(series.clone(), Provenance::Computed).format();
    Ok(RunRecord {
        key: RunKey::of(req),
        engine: ENGINE_HASH.to_string(),
        r: cong.r,
        status: run.status,
        factored: computed.as_ref().map(|h| h.factored(p)),
        series,
        formatted,
        dims_l: run.dims_l,
        dims_m: run.dims_m,
        conjectures,
        theorem,
        shape,
        within_baby_verma,
        fast_eval: run.fast_eval,
        timing: Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
            cache_hit: false,
        },
    })
}

pub fn default_cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("CHEREDNIK_CACHE_DIR") {
        return Some(PathBuf::from(dir));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("cherednik"))
}

/// Records from `runs.jsonl`. Lines that fail to parse, carry another format
/// version, or come from another engine build are skipped.
pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, RunRecord>,
}

impl Cache {
    pub fn open(dir: &Path) -> std::io::Result<Self> {
        fs::create_dir_all(dir)?;
        let path = dir.join("runs.jsonl");
        let mut entries = HashMap::new();
        if let Ok(file) = File::open(&path) {
            for line in BufReader::new(file).lines() {
                let Ok(line) = line else { break };
                let Ok(rec) = serde_json::from_str::<RunRecord>(&line) else {
                    continue;
                };
                if rec.key.format_version == FORMAT_VERSION && rec.engine == ENGINE_HASH {
                    entries.insert(rec.key.id(), rec);
                }
            }
        }
        Ok(Self { path, entries })
    }

    pub fn get(&self, key: &RunKey) -> Option<RunRecord> {
        self.entries.get(&key.id()).map(|r| {
            let mut r = r.clone();
            r.timing.cache_hit = true;
            r
        })
    }

    pub fn writer(&self) -> std::io::Result<CacheWriter> {
        let file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        Ok(CacheWriter { file })
    }
}

pub struct CacheWriter {
    file: File,
}

impl CacheWriter {
    pub fn append(&mut self, rec: &RunRecord) -> std::io::Result<()> {
        let mut line = serde_json::to_string(rec).map_err(std::io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip_through_json() {
        let mut req = HilbertRequest::new(2, 3, 1);
        req.fast_eval = Some(FastEval { trials: 2, seed: 1 });
        let rec = compute_record(&req).unwrap();
        let text = serde_json::to_string(&rec).unwrap();
        assert_eq!(serde_json::from_str::<RunRecord>(&text).unwrap(), rec);
    }

    #[test]
    fn theorem_coverage() {
        assert!(theorem_for(2, 2, 0).is_none());
        assert!(theorem_for(3, 7, 0).is_some());
        assert_eq!(theorem_for(2, 4, 1).unwrap().1.coeffs(), &[1, 3, 3, 1]);
    }

    #[test]
    fn cache_skips_foreign_lines() {
        let dir = tempfile::tempdir().unwrap();
        let rec = compute_record(&HilbertRequest::new(2, 3, 0)).unwrap();
        let mut stale = rec.clone();
        stale.key.format_version = 0;
        let body = format!(
            "not json\n{}\n{}\n",
            serde_json::to_string(&stale).unwrap(),
            serde_json::to_string(&rec).unwrap()
        );
        fs::write(dir.path().join("runs.jsonl"), body).unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        assert_eq!(cache.entries.len(), 1);
        assert!(cache.get(&rec.key).unwrap().timing.cache_hit);
    }
}
