//! Gold-standard precision and recall, threshold sweeps, and the presence
//! reports by productivity, main domain and academic age.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{AccountRecord, AuthorId, AuthorRecord, Domain, GoldPair};
use crate::scoring::{filter_threshold, MatchSet, ScoredPair};

pub const DEFAULT_THRESHOLDS: [i32; 5] = [6, 5, 4, 3, 2];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold standard is empty")]
    EmptyGold,
    #[error("gold standard references unknown authors: {}", .0.join(", "))]
    UnknownAuthors(Vec<String>),
    #[error("author `{0}` has no publications")]
    NoPublications(String),
    #[error("invalid productivity bins: {0}")]
    InvalidBins(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrSweepRow {
    pub threshold: i32,
    pub matched_scholars: usize,
    pub precision: f64,
    pub recall: f64,
}

fn pair_key(author: &AuthorId, handle: &str) -> (String, String) {
    (author.0.clone(), handle.to_ascii_lowercase())
}

/// Pair-level precision and recall over the gold authors only. Handles
/// compare case-insensitively. Precision is 0 when no gold author has a
/// prediction.
pub fn precision_recall(predicted: &[ScoredPair], gold: &[GoldPair]) -> Result<(f64, f64), EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let gold_pairs: HashSet<(String, String)> = gold.iter().map(|g| pair_key(&g.author_id, &g.handle)).collect();
    let gold_authors: HashSet<&str> = gold.iter().map(|g| g.author_id.as_str()).collect();
    let considered: HashSet<(String, String)> = predicted
        .iter()
        .filter(|p| gold_authors.contains(p.author_id.as_str()))
        .map(|p| pair_key(&p.author_id, &p.handle))
        .collect();
    let correct = considered.intersection(&gold_pairs).count();
    let precision = if considered.is_empty() {
        0.0
    } else {
        correct as f64 / considered.len() as f64
    };
    Ok((precision, correct as f64 / gold_pairs.len() as f64))
}

/// One row per threshold, highest threshold first. `selected` must already
/// hold only each author's best pairs.
pub fn threshold_sweep(
    selected: &[ScoredPair],
    gold: &[GoldPair],
    thresholds: &[i32],
) -> Result<Vec<PrSweepRow>, EvalError> {
    let mut ts = thresholds.to_vec();
    ts.sort_unstable_by(|a, b| b.cmp(a));
    ts.dedup();
    ts.into_iter()
        .map(|threshold| {
            let m = filter_threshold(selected, threshold);
            let (precision, recall) = precision_recall(&m.pairs, gold)?;
            Ok(PrSweepRow {
                threshold,
                matched_scholars: m.matched_authors().len(),
                precision,
                recall,
            })
        })
        .collect()
}

pub fn sweep_tsv(rows: &[PrSweepRow]) -> String {
    let mut out = String::from("threshold\tmatched\tprecision\trecall\n");
    for r in rows {
        let _ = writeln!(out, "{}\t{}\t{:.6}\t{:.6}", r.threshold, r.matched_scholars, r.precision, r.recall);
    }
    out
}

/// Drops gold pairs whose handle is unknown or never tweeted a tracked paper.
pub fn restrict_gold_to_active(gold: &[GoldPair], accounts: &[AccountRecord]) -> Vec<GoldPair> {
    let active: HashSet<String> = accounts
        .iter()
        .filter(|a| !a.tweeted_pub_ids.is_empty())
        .map(AccountRecord::handle_key)
        .collect();
    gold.iter()
        .filter(|g| active.contains(&g.handle.to_ascii_lowercase()))
        .cloned()
        .collect()
}

pub fn check_gold_authors(gold: &[GoldPair], authors: &[AuthorRecord]) -> Result<(), EvalError> {
    let known: HashSet<&str> = authors.iter().map(|a| a.author_id.as_str()).collect();
    let unknown: BTreeSet<String> = gold
        .iter()
        .filter(|g| !known.contains(g.author_id.as_str()))
        .map(|g| g.author_id.0.clone())
        .collect();
    if unknown.is_empty() {
        Ok(())
    } else {
        Err(EvalError::UnknownAuthors(unknown.into_iter().collect()))
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// Domain holding most of the author's publications; ties are broken by a
/// draw seeded from `seed` and the author id.
pub fn assign_main_domain(author: &AuthorRecord, seed: u64) -> Result<Domain, EvalError> {
    let mut counts: BTreeMap<Domain, usize> = BTreeMap::new();
    for p in &author.publications {
        *counts.entry(p.domain).or_insert(0) += 1;
    }
    let max = *counts
        .values()
        .max()
        .ok_or_else(|| EvalError::NoPublications(author.author_id.0.clone()))?;
    let tied: Vec<Domain> = counts.into_iter().filter(|&(_, n)| n == max).map(|(d, _)| d).collect();
    if tied.len() == 1 {
        return Ok(tied[0]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(author.author_id.as_str()));
    Ok(*tied.choose(&mut rng).expect("non-empty"))
}

/// Publication-count bins given by their inclusive lower bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductivityBins {
    lower: Vec<usize>,
}

impl Default for ProductivityBins {
    fn default() -> Self {
        ProductivityBins {
            lower: vec![1, 2, 3, 5, 10, 20, 50],
        }
    }
}

impl ProductivityBins {
    pub fn new(lower: Vec<usize>) -> Result<Self, EvalError> {
        if lower.is_empty() || !lower.windows(2).all(|w| w[0] < w[1]) {
            return Err(EvalError::InvalidBins("lower bounds must be non-empty and strictly increasing".into()));
        }
        Ok(ProductivityBins { lower })
    }

    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// Authors below the first bound fall in the first bin.
    pub fn bin_of(&self, n_pubs: usize) -> usize {
        self.lower.iter().rposition(|&l| n_pubs >= l).unwrap_or(0)
    }

    pub fn label(&self, bin: usize) -> String {
        let lo = self.lower[bin];
        match self.lower.get(bin + 1) {
            None => format!("{lo}+"),
            Some(&next) if next == lo + 1 => lo.to_string(),
            Some(&next) => format!("{lo}-{}", next - 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShareRow {
    pub label: String,
    pub n_scholars: usize,
    pub n_matched: usize,
    pub share: f64,
}

impl ShareRow {
    fn new(label: String, n_scholars: usize, n_matched: usize) -> Self {
        let share = if n_scholars == 0 {
            0.0
        } else {
            n_matched as f64 / n_scholars as f64
        };
        ShareRow {
            label,
            n_scholars,
            n_matched,
            share,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgeRow {
    pub label: String,
    pub n_matched: usize,
    pub n_unmatched: usize,
    pub mean_yfp_matched: Option<f64>,
    pub mean_yfp_unmatched: Option<f64>,
}

pub type MatchedAuthors = HashSet<AuthorId>;

pub fn matched_authors(matches: &MatchSet) -> MatchedAuthors {
    matches.pairs.iter().map(|p| p.author_id.clone()).collect()
}

pub fn productivity_share_report(
    authors: &[AuthorRecord],
    matched: &MatchedAuthors,
    bins: &ProductivityBins,
) -> Vec<ShareRow> {
    let mut n = vec![(0usize, 0usize); bins.len()];
    for a in authors {
        let slot = &mut n[bins.bin_of(a.publications.len())];
        slot.0 += 1;
        slot.1 += usize::from(matched.contains(&a.author_id));
    }
    n.into_iter()
        .enumerate()
        .map(|(i, (all, hit))| ShareRow::new(bins.label(i), all, hit))
        .collect()
}

/// Shares per main domain; authors without publications have no domain and
/// are left out.
pub fn domain_share_report(authors: &[AuthorRecord], matched: &MatchedAuthors, seed: u64) -> Vec<ShareRow> {
    let mut n: BTreeMap<Domain, (usize, usize)> = Domain::ALL.iter().map(|d| (*d, (0, 0))).collect();
    for a in authors {
        if let Ok(d) = assign_main_domain(a, seed) {
            let slot = n.get_mut(&d).expect("all domains present");
            slot.0 += 1;
            slot.1 += usize::from(matched.contains(&a.author_id));
        }
    }
    Domain::ALL
        .iter()
        .map(|d| {
            let (all, hit) = n[d];
            ShareRow::new(d.as_str().to_string(), all, hit)
        })
        .collect()
}

fn mean(sum: i64, n: usize) -> Option<f64> {
    (n > 0).then(|| sum as f64 / n as f64)
}

pub fn academic_age_report(
    authors: &[AuthorRecord],
    matched: &MatchedAuthors,
    bins: &ProductivityBins,
) -> Vec<AgeRow> {
    let mut acc = vec![[(0i64, 0usize); 2]; bins.len()];
    for a in authors {
        let side = usize::from(matched.contains(&a.author_id));
        let slot = &mut acc[bins.bin_of(a.publications.len())][side];
        slot.0 += i64::from(a.year_first_pub);
        slot.1 += 1;
    }
    acc.into_iter()
        .enumerate()
        .map(|(i, [unmatched, hit])| AgeRow {
            label: bins.label(i),
            n_matched: hit.1,
            n_unmatched: unmatched.1,
            mean_yfp_matched: mean(hit.0, hit.1),
            mean_yfp_unmatched: mean(unmatched.0, unmatched.1),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DemographicsReport {
    pub productivity: Vec<ShareRow>,
    pub domain: Vec<ShareRow>,
    pub academic_age: Vec<AgeRow>,
}

impl DemographicsReport {
    pub fn build(authors: &[AuthorRecord], matches: &MatchSet, bins: &ProductivityBins, seed: u64) -> Self {
        let matched = matched_authors(matches);
        DemographicsReport {
            productivity: productivity_share_report(authors, &matched, bins),
            domain: domain_share_report(authors, &matched, seed),
            academic_age: academic_age_report(authors, &matched, bins),
        }
    }

    pub fn to_tsv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |m| format!("{m:.6}"));
        let mut out = String::new();
        for (name, rows) in [("productivity", &self.productivity), ("domain", &self.domain)] {
            let _ = writeln!(out, "[{name}]\nbin\tn_scholars\tn_matched\tshare");
            for r in rows {
                let _ = writeln!(out, "{}\t{}\t{}\t{:.6}", r.label, r.n_scholars, r.n_matched, r.share);
            }
            out.push('\n');
        }
        out.push_str("[academic_age]\nbin\tn_matched\tn_unmatched\tmean_yfp_matched\tmean_yfp_unmatched\n");
        for r in &self.academic_age {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                r.label,
                r.n_matched,
                r.n_unmatched,
                opt(r.mean_yfp_matched),
                opt(r.mean_yfp_unmatched)
            );
        }
        out
    }
}
