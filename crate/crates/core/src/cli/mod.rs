//! The `spreadforge` command line. Every command prints a deterministic report
//! on standard output; artifacts go to the files named by `--emit` and
//! similar flags. Exit codes: 0 success, 1 certification or consistency
//! failure (with witness JSON on standard output), 2 usage or input errors.

mod enumerate;
mod manifest;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use enumerate::{EnumerateArgs, ModeArg, CHECKPOINT_DIR_VAR};
pub use manifest::{file_digest, sha256_hex, RunManifest};

use crate::classify::{
    census_special_spreads, characteristic_of_spread, orbit_and_stabilizer, ClassReport, HyperbolicPointModel,
    SimilitudeGroup, SpreadCensus, DEFAULT_GROUP_SEED, FULL_CENSUS_MAX_Q,
};
use crate::ddg::{
    balanced_assignment, canonical_form, enumerate_split_graphs, is_equitable, paired_spread_graph,
    split_spread_graph_via, clique_removed_graph, split_clique_graph, verify_ddg, DdgConstruction, DdgParams, SideAssignment,
    SplitRoute,
};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::projgeom::forms::Polarity;
use crate::projgeom::linalg::Matrix;
use crate::projgeom::{klein_form, SymplecticForm};
use crate::spgraph::{build_sp_graph, graph6, srg_spectrum, verify_srg, SrgParams};
use crate::spreads::{
    build_symplectic_spread, construct_special_spread, verify_special_spread, verify_symplectic_spread,
    SpecialSpread, SymplecticQuadrangle,
};

/// Orbit-search budget for `--deep` stabilizer checks.
const DEEP_ORBIT_BUDGET: usize = 50_000_000;

#[derive(Parser, Debug)]
#[command(name = "spreadforge", version, about = "Symplectic graphs, special spreads and divisible design graphs")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_SEED)]
    pub seed: u64,
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Enable resource-heavy checks (orbit searches for q >= 7).
    #[arg(long, global = true)]
    pub deep: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build GF(q) and check the field axioms on its tables.
    FieldCheck {
        #[arg(long)]
        q: u32,
    },
    /// Point, line and quadric counts of W(q) and the Klein quadric.
    Geometry {
        #[arg(long)]
        q: u32,
        /// Write the point and line tables as JSON.
        #[arg(long)]
        dump_geometry: Option<PathBuf>,
    },
    /// Certify Sp(2e,q) as a strongly regular graph.
    Graph {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        e: usize,
        /// Write the graph in graph6 format.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Construct or verify a spread.
    #[command(subcommand)]
    Spread(SpreadCommand),
    /// Enumerate special spreads by exact cover.
    Enumerate(EnumerateArgs),
    /// Classify the special spreads of W(q).
    Classify {
        #[arg(long)]
        q: u32,
        /// Directory for one representative spread file per class.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and certify one divisible design graph.
    Ddg(DdgArgs),
    /// Build every applicable family for (q, e) and report them.
    Census {
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 2)]
        e: usize,
        /// Also count isomorphism classes of the V1/V2-split graphs and
        /// compare the spread-complement graphs by canonical form.
        #[arg(long)]
        isomorphs: bool,
        /// Write the report JSON to this file as well.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Classes of special spreads as an aligned text table.
    Tables {
        #[arg(long)]
        q: u32,
    },
    /// Re-run the command recorded in a manifest and compare output digests.
    Replay {
        manifest: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum SpreadCommand {
    Construct {
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "special")]
        kind: SpreadKind,
        /// Rank of the members for symplectic spreads of PG(2e-1,q).
        #[arg(long, default_value_t = 2)]
        e: usize,
        #[arg(long)]
        verify: bool,
        /// Write the spread JSON to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    Verify {
        /// Spread JSON as written by `spread construct`, or a bare special spread.
        #[arg(long)]
        input: PathBuf,
        /// Expected q.
        #[arg(long)]
        q: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpreadKind {
    Special,
    Symplectic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    ComplementWithin,
    PartialComplementOfSp,
    PartialComplementOfComplement,
}

impl From<RouteArg> for SplitRoute {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::ComplementWithin => SplitRoute::ComplementWithin,
            RouteArg::PartialComplementOfSp => SplitRoute::PartialComplementOfSp,
            RouteArg::PartialComplementOfComplement => SplitRoute::PartialComplementOfComplement,
        }
    }
}

#[derive(clap::Args, Debug)]
pub struct DdgArgs {
    /// 1: spread complement, 2: V1/V2 split of a special spread,
    /// 3: symplectic spread cliques removed, 4: balanced symplectic split.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub family: u8,
    #[arg(long)]
    pub q: u32,
    #[arg(long, default_value_t = 2)]
    pub e: usize,
    /// Side bits (least significant first): per spread pair for family 2,
    /// per spread member for family 4.
    #[arg(long)]
    pub assignment: Option<u64>,
    /// Construction route for family 2.
    #[arg(long, value_enum, default_value = "complement-within")]
    pub route: RouteArg,
    /// Write the graph in graph6 format.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}

/// Per-run state: buffered standard output and everything the manifest records.
pub struct Ctx {
    stdout: Vec<u8>,
    files: Vec<PathBuf>,
    seed: u64,
    deep: bool,
    q: Option<u32>,
    e: Option<usize>,
    field: Option<Arc<FieldSpec>>,
    grams: BTreeMap<String, Vec<Vec<usize>>>,
}

fn indices(m: &Matrix) -> Vec<Vec<usize>> {
    m.iter().map(|r| r.iter().map(|x| x.index()).collect()).collect()
}

impl Ctx {
    fn new(seed: u64, deep: bool) -> Self {
        Ctx {
            stdout: Vec::new(),
            files: Vec::new(),
            seed,
            deep,
            q: None,
            e: None,
            field: None,
            grams: BTreeMap::new(),
        }
    }

    fn note_field(&mut self, f: Arc<FieldSpec>, e: Option<usize>) {
        self.q = Some(f.q());
        if let Some(n) = e {
            self.e = e;
            self.grams.insert("symplectic".into(), indices(SymplecticForm::standard(&f, n).gram()));
        }
        self.field = Some(f);
    }

    fn note_gram(&mut self, name: &str, m: &Matrix) {
        self.grams.insert(name.into(), indices(m));
    }

    fn text(&mut self, s: &str) {
        self.stdout.extend_from_slice(s.as_bytes());
    }

    fn json<T: Serialize>(&mut self, v: &T) -> Result<()> {
        let s = serde_json::to_string_pretty(v)?;
        self.text(&s);
        self.text("\n");
        Ok(())
    }

    fn write_file(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        std::fs::write(path, bytes)?;
        self.record_file(path);
        Ok(())
    }

    fn record_file(&mut self, path: &Path) {
        if !self.files.iter().any(|p| p == path) {
            self.files.push(path.to_path_buf());
        }
    }
}

fn field(q: u32) -> Result<Arc<FieldSpec>> {
    Ok(Arc::new(FieldSpec::new(q)?))
}

fn field_check(ctx: &mut Ctx, q: u32) -> Result<()> {
    let f = field(q)?;
    ctx.note_field(f.clone(), None);
    let axioms = f.check_axioms()?;
    let nonsquare = if f.is_odd() { Some(f.find_nonsquare()?.index()) } else { None };
    ctx.json(&json!({
        "q": f.q(),
        "p": f.p(),
        "k": f.k(),
        "modulus": f.modulus(),
        "primitive_element": f.primitive_element().index(),
        "nonsquare": nonsquare,
        "axioms": axioms,
        "status": "pass",
    }))
}

fn expect_count(what: &str, got: usize, want: usize) -> Result<usize> {
    if got != want {
        return Err(Error::cert(what, format!("{got} found, closed form gives {want}")));
    }
    Ok(got)
}

fn geometry(ctx: &mut Ctx, q: u32, dump: Option<&Path>) -> Result<()> {
    let w = SymplecticQuadrangle::new(q)?;
    ctx.note_field(w.field_arc().clone(), Some(2));
    let q = w.q();
    let f = w.field();
    let klein = klein_form(f);
    ctx.note_gram("klein", klein.coeffs());
    let lines = w.lines().len();
    let iso = w.isotropic_lines().len();
    let mut report = json!({
        "q": q,
        "points": expect_count("points", w.num_points(), (q * q + 1) * (q + 1))?,
        "lines": expect_count("lines", lines, (q * q + 1) * (q * q + q + 1))?,
        "isotropic_lines": expect_count("isotropic lines", iso, (q + 1) * (q * q + 1))?,
        "hyperbolic_lines": expect_count("hyperbolic lines", lines - iso, q * q * (q * q + 1))?,
        "klein_quadric_points": expect_count("Klein quadric", klein.points(w.pg5()).len(), (q * q + 1) * (q * q + q + 1))?,
    });
    if q % 2 == 1 {
        let model = HyperbolicPointModel::new(&w)?;
        ctx.note_gram("parabolic", model.form().gram());
        let pairs = q * q * (q * q + 1) / 2;
        report["hyperbolic_pairs"] = json!(expect_count("hyperbolic pairs", w.all_pairs().len(), pairs)?);
        report["model_points"] = json!(expect_count("model points", model.len(), pairs)?);
        report["parabolic_quadric_points"] =
            json!(expect_count("Q(4,q)", model.quadric().len(), (q * q * q * q - 1) / (q - 1))?);
        report["relations"] = json!(model.num_relations());
    }
    if let Some(p) = dump {
        let points: Vec<Vec<usize>> =
            (0..w.num_points()).map(|i| w.pg3().coords(i).iter().map(|x| x.index()).collect()).collect();
        let line_table: Vec<Value> = (0..lines)
            .map(|l| json!({"points": w.line_points(l), "isotropic": w.is_isotropic(l)}))
            .collect();
        let bytes = serde_json::to_vec_pretty(&json!({"q": q, "points": points, "lines": line_table}))?;
        ctx.write_file(p, &bytes)?;
    }
    ctx.json(&report)
}

fn graph(ctx: &mut Ctx, q: u32, e: usize, emit: Option<&Path>) -> Result<()> {
    let f = field(q)?;
    ctx.note_field(f.clone(), Some(e));
    let (g, _) = build_sp_graph(e, f)?;
    let p = verify_srg(&g)?;
    let q = q as usize;
    let want = SrgParams::symplectic(e as u32, q);
    if p != want {
        return Err(Error::cert("srg-parameters", format!("{p:?}, closed form gives {want:?}")));
    }
    let spec = srg_spectrum(&p)?;
    let t = q.pow(e as u32 - 1) as i64;
    if (spec.r, spec.s) != (t - 1, -t - 1) {
        return Err(Error::cert("eigenvalues", format!("r={} s={}, expected {} and {}", spec.r, spec.s, t - 1, -t - 1)));
    }
    if let Some(path) = emit {
        ctx.write_file(path, (graph6::encode(&g) + "\n").as_bytes())?;
    }
    ctx.json(&json!({"q": q, "e": e, "params": p, "spectrum": spec, "status": "pass"}))
}

fn spread_construct(
    ctx: &mut Ctx,
    q: u32,
    kind: SpreadKind,
    e: usize,
    verify: bool,
    emit: Option<&Path>,
) -> Result<()> {
    let report = match kind {
        SpreadKind::Special => {
            if e != 2 {
                return Err(Error::Domain("special spreads live in PG(3,q); use --e 2".into()));
            }
            let w = SymplecticQuadrangle::new(q)?;
            ctx.note_field(w.field_arc().clone(), Some(2));
            let s = construct_special_spread(&w)?;
            if verify {
                verify_special_spread(&w, &s)?;
            }
            json!({"kind": "special", "q": s.q, "verified": verify, "spread": s})
        }
        SpreadKind::Symplectic => {
            let f = field(q)?;
            ctx.note_field(f.clone(), Some(e));
            let r = build_symplectic_spread(e, f.clone())?;
            ctx.note_gram("base_change", &r.base_change);
            if verify {
                let (g, space) = build_sp_graph(e, f.clone())?;
                verify_symplectic_spread(&space, &SymplecticForm::standard(&f, e), &g, &r.members)?;
            }
            json!({
                "kind": "symplectic",
                "q": r.q,
                "e": r.e,
                "verified": verify,
                "members": r.member_points,
                "base_change": indices(&r.base_change),
            })
        }
    };
    if let Some(p) = emit {
        ctx.write_file(p, (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    }
    ctx.json(&report)
}

fn spread_verify(ctx: &mut Ctx, input: &Path, q: Option<u32>) -> Result<()> {
    let v: Value = serde_json::from_slice(&std::fs::read(input)?)?;
    let check_q = |got: usize| match q {
        Some(want) if want as usize != got => Err(Error::Validation(format!("file holds q={got}, --q {want}"))),
        _ => Ok(()),
    };
    if v.get("kind").and_then(Value::as_str) == Some("symplectic") {
        let get = |k: &str| {
            v.get(k).and_then(Value::as_u64).ok_or_else(|| Error::Validation(format!("missing field {k}")))
        };
        let (fq, e) = (get("q")? as usize, get("e")? as usize);
        check_q(fq)?;
        let members: Vec<Vec<usize>> = serde_json::from_value(v["members"].clone())?;
        let f = field(fq as u32)?;
        ctx.note_field(f.clone(), Some(e));
        let (g, space) = build_sp_graph(e, f.clone())?;
        if let Some(p) = members.iter().flatten().find(|&&p| p >= space.num_points()) {
            return Err(Error::Validation(format!("point id {p} out of range")));
        }
        let subspaces: Vec<_> = members.iter().map(|m| space.subspace_of_points(m)).collect();
        verify_symplectic_spread(&space, &SymplecticForm::standard(&f, e), &g, &subspaces)?;
        return ctx.json(&json!({"kind": "symplectic", "q": fq, "e": e, "status": "pass"}));
    }
    let s: SpecialSpread = serde_json::from_value(v.get("spread").cloned().unwrap_or(v))?;
    check_q(s.q)?;
    let w = SymplecticQuadrangle::new(s.q as u32)?;
    ctx.note_field(w.field_arc().clone(), Some(2));
    let n = w.num_points();
    if s.lines.iter().flatten().any(|&p| p >= n) || s.pairing.iter().any(|&i| i >= s.lines.len()) {
        return Err(Error::Validation("index out of range".into()));
    }
    verify_special_spread(&w, &s)?;
    ctx.json(&json!({"kind": "special", "q": s.q, "lines": s.lines.len(), "status": "pass"}))
}

struct Classified {
    census: SpreadCensus,
    /// Classes ordered by stabilizer order, then characteristic.
    classes: Vec<ClassReport>,
    stabilizer_method: &'static str,
}

fn classified(ctx: &mut Ctx, q: u32) -> Result<(SymplecticQuadrangle, Classified)> {
    let w = SymplecticQuadrangle::new(q)?;
    ctx.note_field(w.field_arc().clone(), Some(2));
    let model = HyperbolicPointModel::new(&w)?;
    ctx.note_gram("parabolic", model.form().gram());
    let g = SimilitudeGroup::with_seed(&w, ctx.seed)?;
    let census = census_special_spreads(&w, &model, &g)?;
    let mut classes = census.classes.clone();
    classes.sort_by(|a, b| (a.stabilizer_order, &a.characteristic).cmp(&(b.stabilizer_order, &b.characteristic)));
    for c in &classes {
        let s = SpecialSpread::from_pairs(&w, &c.representative);
        verify_special_spread(&w, &s)?;
        // both characteristic routes must agree with the recorded one
        let ch = characteristic_of_spread(&w, &model, &s)?;
        if ch != c.characteristic {
            return Err(Error::Internal(format!("class {}: representative gives {ch}", c.characteristic)));
        }
    }
    let mut stabilizer_method = if w.q() <= FULL_CENSUS_MAX_Q { "orbit" } else { "pair-count" };
    if ctx.deep && w.q() > FULL_CENSUS_MAX_Q {
        for c in &classes {
            let o = orbit_and_stabilizer(&g, &c.representative, DEEP_ORBIT_BUDGET)?;
            if o.stabilizer_order != c.stabilizer_order {
                return Err(Error::cert(
                    "stabilizer",
                    format!("class {}: orbit search gives {}, pair count {}", c.characteristic, o.stabilizer_order, c.stabilizer_order),
                ));
            }
        }
        stabilizer_method = "pair-count+orbit";
    }
    Ok((w, Classified { census, classes, stabilizer_method }))
}

fn classify(ctx: &mut Ctx, q: u32, out: Option<&Path>) -> Result<()> {
    let (w, c) = classified(ctx, q)?;
    if let Some(d) = out {
        std::fs::create_dir_all(d)?;
    }
    let mut rows = Vec::new();
    for (i, cl) in c.classes.iter().enumerate() {
        let file = match out {
            Some(d) => {
                let p = d.join(format!("class-{}.json", i + 1));
                let s = SpecialSpread::from_pairs(&w, &cl.representative);
                ctx.write_file(&p, (serde_json::to_string_pretty(&s)? + "\n").as_bytes())?;
                Some(p.display().to_string())
            }
            None => None,
        };
        rows.push(json!({
            "example": i + 1,
            "characteristic": cl.characteristic,
            "orbit_size": cl.orbit_size,
            "stabilizer_order": cl.stabilizer_order,
            "found": cl.found,
            "representative_pairs": cl.representative,
            "representative_file": file,
        }));
    }
    ctx.json(&json!({
        "q": c.census.q,
        "group_order": c.census.group_order.to_string(),
        "mode": c.census.mode,
        "enumerated": c.census.enumerated,
        "total": c.census.total,
        "stabilizer_method": c.stabilizer_method,
        "classes": rows,
    }))
}

fn tables(ctx: &mut Ctx, q: u32) -> Result<()> {
    let (_, c) = classified(ctx, q)?;
    let rows: Vec<[String; 3]> = c
        .classes
        .iter()
        .enumerate()
        .map(|(i, cl)| [(i + 1).to_string(), cl.stabilizer_order.to_string(), cl.characteristic.to_string()])
        .collect();
    let head = ["Example", "Stabilizer", "Characteristic"];
    let width: Vec<usize> =
        (0..3).map(|j| rows.iter().map(|r| r[j].len()).chain([head[j].len()]).max().unwrap_or(0)).collect();
    ctx.text(&format!(
        "Special spreads of W({}): {} class{}, {} spreads, group order {}\n",
        c.census.q,
        c.classes.len(),
        if c.classes.len() == 1 { "" } else { "es" },
        c.census.total,
        c.census.group_order
    ));
    ctx.text(&format!("{:>w0$}  {:>w1$}  {}\n", head[0], head[1], head[2], w0 = width[0], w1 = width[1]));
    for r in &rows {
        ctx.text(&format!("{:>w0$}  {:>w1$}  {}\n", r[0], r[1], r[2], w0 = width[0], w1 = width[1]));
    }
    Ok(())
}

struct Built {
    construction: DdgConstruction,
    expected: DdgParams,
}

fn build_family(family: u8, q: u32, e: usize, assignment: Option<u64>, route: SplitRoute) -> Result<Built> {
    let f = field(q)?;
    let qq = f.q() as usize;
    match family {
        1 | 2 => {
            if e != 2 {
                return Err(Error::Domain(format!("family {family} is defined for e = 2")));
            }
            let w = SymplecticQuadrangle::with_field(f)?;
            let s = construct_special_spread(&w)?;
            if family == 1 {
                return Ok(Built { construction: paired_spread_graph(&w, &s)?, expected: DdgParams::paired_spread(qq) });
            }
            let half = (qq * qq).div_ceil(2);
            let mask = assignment.unwrap_or(0);
            if half < 64 && mask >> half != 0 {
                return Err(Error::Validation(format!("assignment {mask:#x} has bits beyond the {half} pairs")));
            }
            let a = SideAssignment::from_mask(half, mask);
            Ok(Built { construction: split_spread_graph_via(&w, &s, &a, route)?, expected: DdgParams::split_spread(qq) })
        }
        3 | 4 => {
            let r = build_symplectic_spread(e, f.clone())?;
            let (sp, _) = build_sp_graph(e, f)?;
            if family == 3 {
                return Ok(Built { construction: clique_removed_graph(&r, &sp)?, expected: DdgParams::clique_removed(e as u32, qq) });
            }
            let members = r.members.len();
            let a = match assignment {
                None => balanced_assignment(members),
                Some(m) => {
                    if members < 64 && m >> members != 0 {
                        return Err(Error::Validation(format!("assignment {m:#x} has bits beyond the {members} members")));
                    }
                    SideAssignment::from_mask(members, m)
                }
            };
            Ok(Built { construction: split_clique_graph(&r, &sp, &a)?, expected: DdgParams::split_clique(e as u32, qq) })
        }
        _ => Err(Error::Validation(format!("unknown family {family}"))),
    }
}

/// Certified tuple, closed form, properness and quotient of one family.
fn certify(family: u8, q: u32, e: usize, b: &Built) -> Result<Value> {
    let c = &b.construction;
    let p = verify_ddg(&c.graph, &c.partition)?;
    if p != b.expected {
        return Err(Error::cert("closed-form", format!("family {family}: certified {p}, closed form {}", b.expected)));
    }
    let quotient = is_equitable(&c.graph, &c.partition)?;
    Ok(json!({
        "family": family,
        "q": q,
        "e": e,
        "params": p,
        "tuple": p.to_string(),
        "proper": p.is_proper(),
        "quotient": quotient,
    }))
}

fn ddg(ctx: &mut Ctx, a: &DdgArgs) -> Result<()> {
    ctx.note_field(field(a.q)?, Some(a.e));
    let b = build_family(a.family, a.q, a.e, a.assignment, a.route.into())?;
    let report = certify(a.family, a.q, a.e, &b)?;
    if let Some(p) = &a.emit {
        ctx.write_file(p, (graph6::encode(&b.construction.graph) + "\n").as_bytes())?;
    }
    ctx.json(&report)
}

fn census(ctx: &mut Ctx, q: u32, e: usize, isomorphs: bool, emit: Option<&Path>) -> Result<()> {
    let f = field(q)?;
    ctx.note_field(f.clone(), Some(e));
    let odd = f.is_odd();
    let families: Vec<u8> = match (odd, e == 2) {
        (true, true) => vec![1, 2, 3, 4],
        (true, false) => vec![3, 4],
        (false, _) => vec![3],
    };
    let mut graphs = Vec::new();
    for fam in families {
        let b = build_family(fam, q, e, None, SplitRoute::ComplementWithin)?;
        let mut r = certify(fam, q, e, &b)?;
        r["graph6"] = json!(graph6::encode(&b.construction.graph));
        graphs.push(r);
    }
    let mut report = json!({"q": f.q(), "e": e, "graphs": graphs});
    if isomorphs {
        if !(odd && e == 2) {
            return Err(Error::Domain("isomorph counts need q odd and e = 2".into()));
        }
        if f.q() as usize > FULL_CENSUS_MAX_Q && !ctx.deep {
            return Err(Error::Unsupported(format!("isomorph census for q={} needs --deep", f.q())));
        }
        let (w, c) = classified(ctx, q)?;
        let spreads: Vec<SpecialSpread> =
            c.classes.iter().map(|cl| SpecialSpread::from_pairs(&w, &cl.representative)).collect();
        let mut certs = Vec::new();
        for s in &spreads {
            certs.push(canonical_form(&paired_spread_graph(&w, s)?.graph)?);
        }
        let distinct = {
            let mut d = certs.clone();
            d.sort();
            d.dedup();
            d.len()
        };
        let t2 = enumerate_split_graphs(&w, &spreads, true)?;
        report["spread_classes"] = json!(c
            .classes
            .iter()
            .zip(&certs)
            .map(|(cl, cert)| json!({
                "stabilizer_order": cl.stabilizer_order,
                "characteristic": cl.characteristic,
                "family1_certificate_sha256": sha256_hex(&serde_json::to_vec(cert).unwrap_or_default()),
            }))
            .collect::<Vec<_>>());
        report["family1_noniso_classes"] = json!(distinct);
        report["family2_isomorphs"] = json!(t2);
    }
    if let Some(p) = emit {
        ctx.write_file(p, (serde_json::to_string_pretty(&report)? + "\n").as_bytes())?;
    }
    ctx.json(&report)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<()> {
    match cmd {
        Command::FieldCheck { q } => field_check(ctx, *q),
        Command::Geometry { q, dump_geometry } => geometry(ctx, *q, dump_geometry.as_deref()),
        Command::Graph { q, e, emit } => graph(ctx, *q, *e, emit.as_deref()),
        Command::Spread(SpreadCommand::Construct { q, kind, e, verify, emit }) => {
            spread_construct(ctx, *q, *kind, *e, *verify, emit.as_deref())
        }
        Command::Spread(SpreadCommand::Verify { input, q }) => spread_verify(ctx, input, *q),
        Command::Enumerate(a) => enumerate::run(ctx, a),
        Command::Classify { q, out } => classify(ctx, *q, out.as_deref()),
        Command::Ddg(a) => ddg(ctx, a),
        Command::Census { q, e, isomorphs, emit } => census(ctx, *q, *e, *isomorphs, emit.as_deref()),
        Command::Tables { q } => tables(ctx, *q),
        Command::Replay { .. } => Err(Error::Validation("replay cannot be nested".into())),
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::FieldCheck { .. } => "field-check",
        Command::Geometry { .. } => "geometry",
        Command::Graph { .. } => "graph",
        Command::Spread(SpreadCommand::Construct { .. }) => "spread construct",
        Command::Spread(SpreadCommand::Verify { .. }) => "spread verify",
        Command::Enumerate(_) => "enumerate",
        Command::Classify { .. } => "classify",
        Command::Ddg(_) => "ddg",
        Command::Census { .. } => "census",
        Command::Tables { .. } => "tables",
        Command::Replay { .. } => "replay",
    }
}

/// Exit code for an error: 1 when a check failed, 2 for bad input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Certification { .. } | Error::Internal(_) | Error::Construction(_) | Error::Budget(_) => 1,
        Error::Domain(_)
        | Error::Degenerate(_)
        | Error::Validation(_)
        | Error::Unsupported(_)
        | Error::Io(_)
        | Error::Json(_) => 2,
    }
}

fn failure_json(e: &Error) -> Value {
    match e {
        Error::Certification { check, witness } => {
            json!({"status": "fail", "check": check, "witness": witness})
        }
        other => json!({"status": "fail", "error": other.to_string()}),
    }
}

/// Strips `--manifest PATH` / `--manifest=PATH` from a command line.
fn without_manifest(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

struct Outcome {
    manifest: RunManifest,
    stdout: Vec<u8>,
    result: Result<()>,
}

fn execute(cli: &Cli, args: Vec<String>) -> Outcome {
    let start = Instant::now();
    let mut ctx = Ctx::new(cli.seed, cli.deep);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build();
    let (result, threads) = match pool {
        Ok(p) => (p.install(|| dispatch(&mut ctx, &cli.command)), p.current_num_threads()),
        Err(e) => (Err(Error::Validation(format!("thread pool: {e}"))), 0),
    };
    let mut outputs = BTreeMap::new();
    outputs.insert("stdout".to_string(), sha256_hex(&ctx.stdout));
    for p in &ctx.files {
        if let Ok(d) = file_digest(p) {
            outputs.insert(p.display().to_string(), d);
        }
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        args,
        command: command_name(&cli.command).to_string(),
        q: ctx.q,
        e: ctx.e,
        field: ctx.field.as_ref().and_then(|f| serde_json::to_value(&**f).ok()),
        gram_matrices: ctx.grams,
        seed: cli.seed,
        threads,
        wall_time_ms: start.elapsed().as_millis() as u64,
        outputs,
    };
    Outcome { manifest, stdout: ctx.stdout, result }
}

fn replay(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let old = RunManifest::load(path)?;
    let mut argv = vec!["spreadforge".to_string()];
    argv.extend(old.args.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| Error::Validation(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(Error::Validation("manifest records a replay".into()));
    }
    let run = execute(&cli, old.args.clone());
    if let Err(e) = &run.result {
        let _ = writeln!(err, "error: {e}");
    }
    let mismatches = old.mismatches(&run.manifest);
    let report = json!({
        "command": old.command,
        "reproduced": mismatches.is_empty(),
        "mismatches": mismatches,
    });
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if mismatches.is_empty() { 0 } else { 1 })
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    if let Command::Replay { manifest } = &cli.command {
        return match replay(manifest, out, err) {
            Ok(code) => code,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                exit_code(&e)
            }
        };
    }
    let args = without_manifest(argv.get(1..).unwrap_or_default());
    let run = execute(&cli, args);
    let _ = out.write_all(&run.stdout);
    let code = match &run.result {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(e);
            if code == 1 {
                let _ = writeln!(out, "{}", failure_json(e));
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    };
    if let Some(p) = &cli.manifest {
        if let Err(e) = run.manifest.save(p) {
            let _ = writeln!(err, "error: manifest: {e}");
            return code.max(2);
        }
    }
    code
}

/// Entry point of the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("spreadforge").chain(args.iter().copied());
        let code = run_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&[]).0, 2);
        assert_eq!(run(&["graph"]).0, 2);
        assert_eq!(run(&["ddg", "--family", "5", "--q", "3"]).0, 2);
        assert_eq!(run(&["field-check", "--q", "6"]).0, 2);
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn field_check_reports_axioms() {
        let (code, out) = run(&["field-check", "--q", "9"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["axioms"]["exhaustive"], true);
        assert_eq!(v["k"], 2);
    }

    #[test]
    fn ddg_family1_tuple() {
        let (code, out) = run(&["ddg", "--family", "1", "--q", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["tuple"], "(40,31,22,24,10,4)");
    }

    #[test]
    fn non_ddg_route_exits_1_with_witness() {
        let (code, out) =
            run(&["ddg", "--family", "2", "--q", "3", "--route", "partial-complement-of-sp"]);
        assert_eq!(code, 1);
        let last = out.lines().last().unwrap();
        let v: Value = serde_json::from_str(last).unwrap();
        assert_eq!(v["status"], "fail");
        assert!(v["witness"].is_string());
    }

    #[test]
    fn manifest_flag_is_stripped() {
        let a: Vec<String> = ["graph", "--manifest", "m.json", "--q", "3", "--manifest=x"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(without_manifest(&a), vec!["graph", "--q", "3"]);
    }
}
