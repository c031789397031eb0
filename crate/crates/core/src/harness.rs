//! Catalog-wide analysis: one [`GroupReport`] per group, rendered as CSV or
//! JSON. Groups are analysed in parallel and rows are emitted in catalog
//! order, so the output depends only on the [`RunConfig`].
//!
//! CSV columns, in order:
//! `label,order,is_soluble,is_nilpotent,fitting_height,rank_g,r_star,rank_gamma_inf,gamma_inf_order,kovacs,lprod,lf2,l0,note`
//! followed by `timing_ms` when timing is enabled. A blank line and a summary
//! table `r_star,max_rank_gamma_inf,groups` follow the rows.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::arith::prime_divisors;
use crate::catalog::{build_named, default_catalog, inverted_elementary_abelian, CatalogEntry};
use crate::checks::{verify_kovacs_with, verify_l0, verify_lf2, verify_lprod, CheckId, CheckOutcome};
use crate::error::{Error, Result};
use crate::group::{Elt, DEFAULT_ENUMERATION_THRESHOLD};
use crate::lattice::DEFAULT_LATTICE_CAP;
use crate::par;
use crate::rank::{rank, RankConfig};
use crate::sinks::{ProfileConfig, RankValue, SinkProfile};
use crate::structure::{
    fitting_height, fitting_subgroup, is_nilpotent, is_soluble, nilpotent_residual, p_core, sylow_subgroup,
};
use crate::subgroup::{commutator_subgroup, Subgroup};

pub const DEFAULT_MAX_ORDER: u64 = 2000;
pub const DEFAULT_L0_PAIRS: usize = 500;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}; expected csv or json"))),
        }
    }
}

/// Keys mirror the command-line flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    /// `default`, `nilpotent`, `examples`, a group name, a group file or a
    /// directory of `*.group` files.
    pub catalog: String,
    pub max_order: u64,
    pub lemmas: Vec<CheckId>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub enumeration_threshold: usize,
    pub lattice_cap: usize,
    pub seed: u64,
    /// Sample size for `(P, g)` pairs per group.
    pub l0_pairs: usize,
    pub timing: bool,
    /// Replaces every sink subgroup by the trivial group in the `l0` check.
    /// Only for exercising the failure path.
    pub corrupt_oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            catalog: "default".into(),
            max_order: DEFAULT_MAX_ORDER,
            lemmas: Vec::new(),
            format: Format::Csv,
            out: None,
            threads: None,
            enumeration_threshold: DEFAULT_ENUMERATION_THRESHOLD,
            lattice_cap: DEFAULT_LATTICE_CAP,
            seed: DEFAULT_SEED,
            l0_pairs: DEFAULT_L0_PAIRS,
            timing: false,
            corrupt_oracle: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("max-order", self.max_order as usize),
            ("enumeration-threshold", self.enumeration_threshold),
            ("lattice-cap", self.lattice_cap),
            ("l0-pairs", self.l0_pairs),
            ("threads", self.threads.unwrap_or(1)),
        ];
        match positive.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(Error::InvalidParameter(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    fn rank_config(&self) -> RankConfig {
        RankConfig {
            lattice_cap: self.lattice_cap,
        }
    }
}

/// Tally of one check over all its cases in a group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaResult {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// First failure, if any.
    pub witness: Option<String>,
    /// Distinct skip reasons, sorted.
    pub skip_reasons: Vec<String>,
}

impl LemmaResult {
    fn add(&mut self, outcome: CheckOutcome) {
        match outcome {
            CheckOutcome::Pass { .. } => self.passed += 1,
            CheckOutcome::Fail { witness } => {
                self.failed += 1;
                self.witness.get_or_insert(witness);
            }
            CheckOutcome::Skipped { reason } => {
                self.skipped += 1;
                if let Err(i) = self.skip_reasons.binary_search(&reason) {
                    self.skip_reasons.insert(i, reason);
                }
            }
        }
    }

    pub fn status(&self) -> &'static str {
        if self.failed > 0 {
            "fail"
        } else if self.passed > 0 {
            "pass"
        } else {
            "skipped"
        }
    }

    /// `status[passed/failed/skipped]`.
    pub fn cell(&self) -> String {
        format!("{}[{}/{}/{}]", self.status(), self.passed, self.failed, self.skipped)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupReport {
    pub label: String,
    pub order: u64,
    pub is_soluble: Option<bool>,
    pub is_nilpotent: Option<bool>,
    /// `None` for non-soluble groups.
    pub fitting_height: Option<usize>,
    pub rank_g: Option<RankValue>,
    pub r_star: Option<RankValue>,
    pub rank_gamma_inf: Option<RankValue>,
    pub gamma_inf_order: Option<usize>,
    pub lemma_results: BTreeMap<CheckId, LemmaResult>,
    /// Cap markers and other caveats; empty when every column is exact.
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub r_star: usize,
    pub max_rank_gamma_inf: usize,
    pub groups: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub groups: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub groups: Vec<GroupReport>,
    pub summary: Vec<SummaryRow>,
    pub totals: Totals,
}

impl Report {
    pub fn has_failures(&self) -> bool {
        self.totals.failed > 0
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, CheckId, &str)> {
        self.groups.iter().flat_map(|g| {
            g.lemma_results.iter().filter_map(move |(id, r)| {
                r.witness.as_deref().map(|w| (g.label.as_str(), *id, w))
            })
        })
    }
}

/// Resolves the catalog selector into entries in canonical order.
pub fn load_catalog(cfg: &RunConfig) -> Result<Vec<CatalogEntry>> {
    let threshold = cfg.enumeration_threshold;
    let entries = match cfg.catalog.as_str() {
        "default" => default_catalog(cfg.max_order, threshold)?,
        "nilpotent" => {
            let all = default_catalog(cfg.max_order, threshold)?;
            let keep: Vec<bool> = par::map(&all, |e| {
                !e.group.is_enumerable() || Subgroup::whole(&e.group).and_then(|w| is_nilpotent(&w)).unwrap_or(false)
            });
            all.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect()
        }
        "examples" => (0..=3)
            .filter(|r| 2 * 3u64.pow(r + 1) <= cfg.max_order)
            .map(inverted_elementary_abelian)
            .collect::<Result<_>>()?,
        other => {
            let path = std::path::Path::new(other);
            if path.is_dir() {
                let mut files: Vec<PathBuf> = std::fs::read_dir(path)?
                    .map(|e| e.map(|e| e.path()))
                    .collect::<std::io::Result<_>>()?;
                files.retain(|p| p.extension().is_some_and(|x| x == "group"));
                files.sort();
                files
                    .iter()
                    .map(|f| build_named(&f.to_string_lossy()))
                    .collect::<Result<_>>()?
            } else {
                vec![build_named(other)?]
            }
        }
    };
    Ok(entries)
}

/// Analyses every catalog group.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let entries = load_catalog(cfg)?;
    let rows: Vec<GroupReport> = par::map(&entries, |e| analyze(e, cfg))
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(assemble(rows))
}

fn assemble(groups: Vec<GroupReport>) -> Report {
    let mut summary: BTreeMap<usize, SummaryRow> = BTreeMap::new();
    let mut totals = Totals {
        groups: groups.len(),
        ..Totals::default()
    };
    for g in &groups {
        if let (Some(rs), Some(rg)) = (g.r_star, g.rank_gamma_inf) {
            let row = summary.entry(rs.rank).or_insert(SummaryRow {
                r_star: rs.rank,
                max_rank_gamma_inf: 0,
                groups: 0,
            });
            row.max_rank_gamma_inf = row.max_rank_gamma_inf.max(rg.rank);
            row.groups += 1;
        }
        for r in g.lemma_results.values() {
            totals.passed += r.passed;
            totals.failed += r.failed;
            totals.skipped += r.skipped;
        }
    }
    Report {
        groups,
        summary: summary.into_values().collect(),
        totals,
    }
}

fn rank_value(c: &crate::rank::RankCertificate) -> RankValue {
    RankValue {
        rank: c.rank,
        exact: c.exact,
    }
}

/// One report row.
pub fn analyze(entry: &CatalogEntry, cfg: &RunConfig) -> Result<GroupReport> {
    let start = Instant::now();
    let group = &entry.group;
    let mut row = GroupReport {
        label: entry.label.clone(),
        order: group.order(),
        is_soluble: None,
        is_nilpotent: None,
        fitting_height: None,
        rank_g: None,
        r_star: None,
        rank_gamma_inf: None,
        gamma_inf_order: None,
        lemma_results: BTreeMap::new(),
        note: String::new(),
        timing_ms: None,
    };
    if !group.is_enumerable() {
        row.note = format!("not enumerated: order above threshold {}", group.threshold());
        for &id in &cfg.lemmas {
            let mut r = LemmaResult::default();
            r.add(CheckOutcome::Skipped {
                reason: "group not enumerated".into(),
            });
            row.lemma_results.insert(id, r);
        }
        return Ok(row);
    }

    let rank_cfg = cfg.rank_config();
    let whole = Subgroup::whole(group)?;
    row.is_soluble = Some(is_soluble(&whole)?);
    row.is_nilpotent = Some(is_nilpotent(&whole)?);
    row.fitting_height = fitting_height(&whole)?;
    let rank_g = rank(&whole, rank_cfg)?;
    row.rank_g = Some(rank_value(&rank_g));
    let profile = SinkProfile::compute(
        group,
        ProfileConfig {
            rank: rank_cfg,
            audit_seed: cfg.seed,
            audits_per_class: 1,
        },
    )?;
    row.r_star = Some(profile.r_star);
    let gamma = nilpotent_residual(&whole)?;
    row.gamma_inf_order = Some(gamma.order());
    let rank_gamma = rank(&gamma, rank_cfg)?;
    row.rank_gamma_inf = Some(rank_value(&rank_gamma));
    if [row.rank_g, row.r_star, row.rank_gamma_inf].iter().any(|r| r.is_some_and(|r| !r.exact)) {
        row.note = format!("lattice cap {} reached; ranks are lower bounds", cfg.lattice_cap);
    }

    for &id in &cfg.lemmas {
        let mut tally = LemmaResult::default();
        match id {
            CheckId::Kovacs => tally.add(verify_kovacs_with(&rank_g, rank_cfg)?),
            CheckId::Lprod => {
                for (m, a) in lprod_cases(&whole, &gamma)? {
                    tally.add(verify_lprod(&m, &a)?);
                }
            }
            CheckId::Lf2 => tally.add(verify_lf2(entry)?),
            CheckId::L0 => {
                for outcome in l0_outcomes(entry, &whole, &profile, cfg)? {
                    tally.add(outcome);
                }
            }
        }
        row.lemma_results.insert(id, tally);
    }
    if cfg.timing {
        row.timing_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(row)
}

/// `(M, A)` pairs: normal subgroups `M` against the whole group, each Sylow
/// subgroup and each Sylow normalizer; plus each Sylow subgroup against its
/// normalizer.
fn lprod_cases(g: &Subgroup, gamma: &Subgroup) -> Result<Vec<(Subgroup, Subgroup)>> {
    let mut normals = vec![g.clone(), commutator_subgroup(g, g)?, gamma.clone(), fitting_subgroup(g)?];
    let mut acting = vec![g.clone()];
    let mut sylow_pairs = Vec::new();
    for p in prime_divisors(g.order() as u64) {
        normals.push(p_core(g, p)?);
        let s = sylow_subgroup(g, p)?;
        let n = s.normalizer_in(g)?;
        acting.push(s.clone());
        acting.push(n.clone());
        sylow_pairs.push((s, n));
    }
    let mut cases = Vec::new();
    for m in &normals {
        for a in &acting {
            cases.push((m.clone(), a.clone()));
        }
    }
    cases.extend(sylow_pairs);
    Ok(cases)
}

/// Every `(P, g)` with `P` a conjugate of a Sylow subgroup and `g` a
/// `p′`-element of `N_G(P)`, in canonical order.
pub fn l0_pairs(g: &Subgroup) -> Result<Vec<(Subgroup, Elt)>> {
    let t = g.parent().table()?;
    let mut pairs = Vec::new();
    for p in prime_divisors(g.order() as u64) {
        let sylow = sylow_subgroup(g, p)?;
        let mut seen: FxHashSet<FixedBitSet> = FxHashSet::default();
        for &h in g.elements() {
            let conj = sylow.conjugate(h);
            if !seen.insert(conj.members().clone()) {
                continue;
            }
            let normalizer = conj.normalizer_in(g)?;
            for &x in normalizer.elements() {
                if t.order_of(x) % p != 0 {
                    pairs.push((conj.clone(), x));
                }
            }
        }
    }
    Ok(pairs)
}

/// Seed for one group's sample, independent of the catalog's composition.
fn group_seed(seed: u64, label: &str) -> u64 {
    label
        .bytes()
        .fold(seed ^ 0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn l0_outcomes(entry: &CatalogEntry, whole: &Subgroup, profile: &SinkProfile, cfg: &RunConfig) -> Result<Vec<CheckOutcome>> {
    let pairs = l0_pairs(whole)?;
    let chosen: Vec<usize> = if pairs.len() <= cfg.l0_pairs {
        (0..pairs.len()).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(group_seed(cfg.seed, &entry.label));
        let mut idx = sample(&mut rng, pairs.len(), cfg.l0_pairs).into_vec();
        idx.sort_unstable();
        idx
    };
    let trivial = Subgroup::trivial(&entry.group)?;
    chosen
        .into_iter()
        .map(|i| {
            let (p, g) = &pairs[i];
            if cfg.corrupt_oracle {
                verify_l0(p, *g, &trivial)
            } else {
                verify_l0(p, *g, &profile.report_for(*g).sink_subgroup)
            }
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>, missing: &str) -> String {
    v.map_or_else(|| missing.to_string(), |x| x.to_string())
}

fn bool_cell(v: Option<bool>) -> String {
    opt(v, "?")
}

fn rank_cell(v: Option<RankValue>) -> String {
    v.map_or_else(|| "?".to_string(), |r| r.display())
}

pub const CSV_COLUMNS: [&str; 14] = [
    "label",
    "order",
    "is_soluble",
    "is_nilpotent",
    "fitting_height",
    "rank_g",
    "r_star",
    "rank_gamma_inf",
    "gamma_inf_order",
    "kovacs",
    "lprod",
    "lf2",
    "l0",
    "note",
];

pub fn render_csv(report: &Report) -> Result<String> {
    let timing = report.groups.iter().any(|g| g.timing_ms.is_some());
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Internal(format!("csv: {e}"));
    let mut header: Vec<&str> = CSV_COLUMNS.to_vec();
    if timing {
        header.push("timing_ms");
    }
    w.write_record(&header).map_err(csv_err)?;
    for g in &report.groups {
        let fitting = match (g.is_soluble, g.fitting_height) {
            (Some(false), _) => "-".to_string(),
            (_, h) => opt(h, "?"),
        };
        let mut rec = vec![
            g.label.clone(),
            g.order.to_string(),
            bool_cell(g.is_soluble),
            bool_cell(g.is_nilpotent),
            fitting,
            rank_cell(g.rank_g),
            rank_cell(g.r_star),
            rank_cell(g.rank_gamma_inf),
            opt(g.gamma_inf_order, "?"),
        ];
        for id in CheckId::ALL {
            rec.push(g.lemma_results.get(&id).map_or_else(|| "-".to_string(), LemmaResult::cell));
        }
        rec.push(g.note.clone());
        if timing {
            rec.push(opt(g.timing_ms, ""));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let mut out = finish(w)?;
    out.push('\n');
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r_star", "max_rank_gamma_inf", "groups"]).map_err(csv_err)?;
    for s in &report.summary {
        w.write_record([s.r_star.to_string(), s.max_rank_gamma_inf.to_string(), s.groups.to_string()])
            .map_err(csv_err)?;
    }
    out.push_str(&finish(w)?);
    Ok(out)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

pub fn render_json(report: &Report) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Internal(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Csv => render_csv(report),
        Format::Json => render_json(report),
    }
}
