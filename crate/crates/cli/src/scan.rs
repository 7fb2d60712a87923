//! Range scans to JSON Lines with an atomically replaced checkpoint.
//!
//! The range is split into blocks of `block` consecutive odd `a` counted
//! from `from`. After each block the records are appended to the output and
//! the checkpoint records the next `a` and the output length. Resuming
//! truncates the output back to that length, so a crash between the two
//! writes only costs the unfinished block.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use collatz_matrix::{AlgoParam, ScanRecord};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BLOCK: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanConfig {
    pub from: u64,
    pub to: u64,
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub workers: usize,
    /// Odd values of `a` per block.
    pub block: u64,
    /// Stop after this many blocks in this invocation.
    pub max_blocks: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregates {
    pub records: u64,
    pub output_bytes: u64,
    pub class_counts: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema_version: u32,
    pub command_fingerprint: String,
    pub next_a: u64,
    pub partial_aggregates: Aggregates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOutcome {
    pub from: u64,
    pub to: u64,
    pub resumed_at: Option<u64>,
    pub blocks_this_run: u64,
    pub complete: bool,
    pub aggregates: Aggregates,
}

/// Widen `[from, to]` outward to odd endpoints.
pub fn odd_bounds(from: u64, to: u64) -> CliResult<(u64, u64)> {
    if from > to {
        return Err(CliError::Usage(format!("--from {from} exceeds --to {to}")));
    }
    let lo = if from.is_multiple_of(2) {
        from.saturating_sub(1).max(1)
    } else {
        from
    };
    let hi = if to.is_multiple_of(2) { to + 1 } else { to };
    Ok((lo, hi))
}

pub fn fingerprint(from: u64, to: u64, block: u64) -> String {
    let text = format!("scan schema={SCHEMA_VERSION} from={from} to={to} block={block}");
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn read_checkpoint(path: &Path) -> CliResult<Checkpoint> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| CliError::Checkpoint {
        path: path.into(),
        reason: e.to_string(),
    })?;
    if cp.schema_version != SCHEMA_VERSION {
        return Err(CliError::Checkpoint {
            path: path.into(),
            reason: format!(
                "schema_version {} (this build reads {SCHEMA_VERSION})",
                cp.schema_version
            ),
        });
    }
    Ok(cp)
}

/// Write to a sibling temp file, flush to disk, then rename over `path`.
pub fn write_checkpoint(path: &Path, cp: &Checkpoint) -> CliResult<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut body = serde_json::to_string_pretty(cp).expect("checkpoint serializes");
    body.push('\n');
    let mut f = File::create(&tmp).map_err(|e| CliError::io(&tmp, e))?;
    f.write_all(body.as_bytes())
        .and_then(|()| f.sync_all())
        .map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

fn block_records(pool: Option<&rayon::ThreadPool>, values: &[u64]) -> CliResult<Vec<ScanRecord>> {
    let build = |&a: &u64| ScanRecord::build(AlgoParam::new(a)?);
    let records: collatz_matrix::Result<Vec<ScanRecord>> = match pool {
        Some(pool) => pool.install(|| values.par_iter().map(build).collect()),
        None => values.iter().map(build).collect(),
    };
    Ok(records?)
}

pub fn run_scan(cfg: &ScanConfig) -> CliResult<ScanOutcome> {
    if cfg.block == 0 {
        return Err(CliError::Usage("--block must be at least 1".into()));
    }
    if cfg.workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let (from, to) = odd_bounds(cfg.from, cfg.to)?;
    let expected = fingerprint(from, to, cfg.block);

    let resume = match &cfg.checkpoint {
        Some(path) if path.exists() => {
            let cp = read_checkpoint(path)?;
            if cp.command_fingerprint != expected {
                return Err(CliError::FingerprintMismatch {
                    path: path.clone(),
                    found: cp.command_fingerprint,
                    expected,
                });
            }
            Some(cp)
        }
        _ => None,
    };

    let (mut out, mut next_a, mut agg) = match &resume {
        Some(cp) => {
            let mut f = OpenOptions::new()
                .write(true)
                .open(&cfg.out)
                .map_err(|e| CliError::io(&cfg.out, e))?;
            let len = f.metadata().map_err(|e| CliError::io(&cfg.out, e))?.len();
            let keep = cp.partial_aggregates.output_bytes;
            if len < keep {
                return Err(CliError::Checkpoint {
                    path: cfg.checkpoint.clone().expect("resuming"),
                    reason: format!(
                        "output {} holds {len} bytes, checkpoint expects {keep}",
                        cfg.out.display()
                    ),
                });
            }
            f.set_len(keep)
                .and_then(|()| f.seek(SeekFrom::End(0)).map(drop))
                .map_err(|e| CliError::io(&cfg.out, e))?;
            (f, cp.next_a, cp.partial_aggregates.clone())
        }
        None => {
            let f = File::create(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
            (f, from, Aggregates::default())
        }
    };

    let pool = if cfg.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| {
                    CliError::Usage(format!("cannot start {} workers: {e}", cfg.workers))
                })?,
        )
    } else {
        None
    };

    let mut blocks = 0;
    let mut stopped = false;
    while next_a <= to {
        if cfg.max_blocks.is_some_and(|m| blocks >= m) {
            stopped = true;
            break;
        }
        let last = to.min(next_a + 2 * (cfg.block - 1));
        let values: Vec<u64> = (next_a..=last).step_by(2).collect();
        let records = block_records(pool.as_ref(), &values)?;
        let mut buf = Vec::new();
        for r in &records {
            serde_json::to_writer(&mut buf, r).expect("record serializes");
            buf.push(b'\n');
            *agg.class_counts
                .entry(r.class.as_str().to_string())
                .or_default() += 1;
        }
        out.write_all(&buf)
            .and_then(|()| out.sync_data())
            .map_err(|e| CliError::io(&cfg.out, e))?;
        agg.records += records.len() as u64;
        agg.output_bytes += buf.len() as u64;
        next_a = last + 2;
        blocks += 1;
        if let Some(path) = &cfg.checkpoint {
            write_checkpoint(
                path,
                &Checkpoint {
                    schema_version: SCHEMA_VERSION,
                    command_fingerprint: expected.clone(),
                    next_a,
                    partial_aggregates: agg.clone(),
                },
            )?;
        }
    }

    Ok(ScanOutcome {
        from,
        to,
        resumed_at: resume.map(|cp| cp.next_a),
        blocks_this_run: blocks,
        complete: !stopped,
        aggregates: agg,
    })
}
