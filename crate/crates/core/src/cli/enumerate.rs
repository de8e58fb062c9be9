//! `enumerate`: streams special spreads as JSONL with resumable checkpoints.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Seek, SeekFrom, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::Ctx;
use crate::classify::{PairOrbits, SimilitudeGroup};
use crate::error::{Error, Result};
use crate::exactcover::{build_spread_instance, Checkpoint, Solver};
use crate::spreads::{verify_special_spread, SpecialSpread, SymplecticQuadrangle};

/// Directory for checkpoint files given without a directory part, and for
/// the default checkpoint file.
pub const CHECKPOINT_DIR_VAR: &str = "SPREADFORGE_CHECKPOINT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Full,
    #[value(name = "fix_one", alias = "fix-one")]
    FixOne,
    #[value(name = "fix_pair", alias = "fix-pair")]
    FixPair,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long, value_enum, default_value = "full")]
    pub mode: ModeArg,
    /// JSONL output, one spread per line.
    #[arg(long)]
    pub emit: Option<PathBuf>,
    /// Checkpoint file; resumed from when it exists.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Solutions between checkpoints.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub checkpoint_every: u64,
    /// Stop after this many solutions in this run (the checkpoint is kept).
    #[arg(long)]
    pub stop_after: Option<u64>,
    /// Certify every spread found.
    #[arg(long)]
    pub verify: bool,
    /// Write the exact-cover instance in text form.
    #[arg(long)]
    pub export_instance: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CheckpointFile {
    q: usize,
    mode: ModeArg,
    forced_sets: Vec<Vec<usize>>,
    /// Length of the JSONL output covered by this checkpoint.
    emit_len: u64,
    sets: Vec<Checkpoint>,
}

#[derive(Serialize)]
struct Record<'a> {
    forced: usize,
    pairs: &'a [usize],
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    checkpoint: bool,
}

#[derive(Serialize)]
struct Summary {
    q: usize,
    mode: ModeArg,
    forced_sets: Vec<Vec<usize>>,
    per_forced: Vec<u64>,
    enumerated: u64,
    total: Option<u64>,
    finished: bool,
    verified: bool,
}

fn checkpoint_path(arg: Option<&Path>, q: u32, mode: ModeArg) -> Option<PathBuf> {
    let dir = std::env::var_os(CHECKPOINT_DIR_VAR).map(PathBuf::from);
    match (arg, dir) {
        (Some(p), Some(d)) if p.parent().is_none_or(|x| x.as_os_str().is_empty()) => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => {
            let m = mode.to_possible_value().map_or("full".to_string(), |v| v.get_name().to_string());
            Some(d.join(format!("enumerate-q{q}-{m}.ckpt")))
        }
        (None, None) => None,
    }
}

fn save(path: &Path, state: &CheckpointFile) -> Result<()> {
    let tmp = path.with_extension("ckpt.tmp");
    std::fs::write(&tmp, serde_json::to_vec(state)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn run(ctx: &mut Ctx, a: &EnumerateArgs) -> Result<()> {
    let w = SymplecticQuadrangle::new(a.q)?;
    ctx.note_field(w.field_arc().clone(), Some(2));
    let q = w.q();
    let inst = build_spread_instance(&w)?;
    if let Some(p) = &a.export_instance {
        ctx.write_file(p, inst.to_text().as_bytes())?;
    }
    let forced_sets: Vec<Vec<usize>> = match a.mode {
        ModeArg::Full => vec![vec![]],
        ModeArg::FixOne => vec![vec![0]],
        ModeArg::FixPair => {
            let g = SimilitudeGroup::with_seed(&w, ctx.seed)?;
            PairOrbits::new(&w, &g).disjoint_representatives().into_iter().map(|(x, y)| vec![x, y]).collect()
        }
    };
    let ck_path = checkpoint_path(a.checkpoint.as_deref(), a.q, a.mode);
    let resumed = ck_path.as_ref().filter(|p| p.exists());
    let mut state = match resumed {
        Some(p) => {
            let s: CheckpointFile = serde_json::from_slice(&std::fs::read(p)?)?;
            if s.q != q || s.mode != a.mode || s.forced_sets != forced_sets || s.sets.len() != forced_sets.len() {
                return Err(Error::Validation(format!("checkpoint {} belongs to another run", p.display())));
            }
            s
        }
        None => CheckpointFile {
            q,
            mode: a.mode,
            forced_sets: forced_sets.clone(),
            emit_len: 0,
            sets: forced_sets
                .iter()
                .map(|f| Checkpoint { forced_rows: f.clone(), ..Default::default() })
                .collect(),
        },
    };
    let mut out: Option<BufWriter<File>> = match &a.emit {
        Some(p) if resumed.is_some() => {
            let mut f = OpenOptions::new().write(true).create(true).truncate(false).open(p)?;
            f.set_len(state.emit_len)?;
            f.seek(SeekFrom::End(0))?;
            Some(BufWriter::new(f))
        }
        Some(p) => Some(BufWriter::new(File::create(p)?)),
        None => None,
    };

    let solver = Solver::new(&inst)?;
    let mut total_emitted: u64 = state.sets.iter().map(|s| s.emitted).sum();
    let mut this_run = 0u64;
    let mut stopped = false;
    for (i, forced) in forced_sets.iter().enumerate() {
        if state.sets[i].finished {
            continue;
        }
        let started = state.sets[i].emitted > 0 || !state.sets[i].frames.is_empty();
        let resume = started.then(|| state.sets[i].clone());
        let mut failure: Option<Error> = None;
        let ck = solver.run(forced, resume.as_ref(), |rows, ck| {
            let step = (|| -> Result<bool> {
                let mut pairs: Vec<usize> = rows.iter().map(|&r| inst.row_tags[r]).collect();
                pairs.sort_unstable();
                if a.verify {
                    verify_special_spread(&w, &SpecialSpread::from_pairs(&w, &pairs))?;
                }
                total_emitted += 1;
                this_run += 1;
                let flag = ck_path.is_some() && total_emitted.is_multiple_of(a.checkpoint_every);
                let stop = a.stop_after.is_some_and(|n| this_run >= n);
                if let Some(o) = out.as_mut() {
                    serde_json::to_writer(&mut *o, &Record { forced: i, pairs: &pairs, checkpoint: flag })?;
                    o.write_all(b"\n")?;
                }
                if let (Some(p), true) = (&ck_path, flag || stop) {
                    if let Some(o) = out.as_mut() {
                        o.flush()?;
                        state.emit_len = o.get_ref().stream_position()?;
                    }
                    state.sets[i] = ck.clone();
                    save(p, &state)?;
                }
                Ok(stop)
            })();
            match step {
                Ok(false) => ControlFlow::Continue(()),
                Ok(true) => {
                    stopped = true;
                    ControlFlow::Break(())
                }
                Err(e) => {
                    failure = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        state.sets[i] = ck;
        if stopped {
            break;
        }
    }
    if let Some(mut o) = out.take() {
        o.flush()?;
        state.emit_len = o.get_ref().stream_position()?;
    }
    if let Some(p) = &ck_path {
        save(p, &state)?;
    }
    if let Some(p) = &a.emit {
        ctx.record_file(p);
    }

    let per_forced: Vec<u64> = state.sets.iter().map(|s| s.emitted).collect();
    let enumerated: u64 = per_forced.iter().sum();
    let finished = state.sets.iter().all(|s| s.finished);
    let half = (q * q).div_ceil(2) as u64;
    let total = match (a.mode, finished) {
        (ModeArg::Full, true) => Some(enumerated),
        (ModeArg::FixOne, true) => {
            let n = enumerated * w.all_pairs().len() as u64;
            if !n.is_multiple_of(half) {
                return Err(Error::Internal(format!("{n} is not divisible by {half}")));
            }
            Some(n / half)
        }
        _ => None,
    };
    ctx.json(&Summary {
        q,
        mode: a.mode,
        forced_sets,
        per_forced,
        enumerated,
        total,
        finished,
        verified: a.verify,
    })
}
