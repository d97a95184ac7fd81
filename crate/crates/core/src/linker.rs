//! Candidate generation by surname and first-initial blocking.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{AccountRecord, AuthorId, AuthorRecord};
use crate::namekit::{parse_display_name, parse_handle, AuthorNameKeys, MatchEvidence, ParsedName};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexEntry {
    /// Position of the author in the indexed slice.
    pub author: usize,
    pub initial: Option<char>,
}

/// Authors bucketed under every spelling variant of their surname.
#[derive(Debug, Clone)]
pub struct SurnameIndex<'a> {
    authors: &'a [AuthorRecord],
    keys: Vec<AuthorNameKeys>,
    buckets: BTreeMap<String, Vec<IndexEntry>>,
}

impl<'a> SurnameIndex<'a> {
    pub fn build(authors: &'a [AuthorRecord]) -> Self {
        let keys: Vec<AuthorNameKeys> = authors.par_iter().map(AuthorNameKeys::new).collect();
        let mut buckets: BTreeMap<String, Vec<IndexEntry>> = BTreeMap::new();
        for (i, k) in keys.iter().enumerate() {
            let entry = IndexEntry {
                author: i,
                initial: k.first_initial,
            };
            for variant in k.surname_variants.iter().chain(std::iter::once(&k.surname_key)) {
                let bucket = buckets.entry(variant.clone()).or_default();
                if bucket.last() != Some(&entry) {
                    bucket.push(entry);
                }
            }
        }
        SurnameIndex { authors, keys, buckets }
    }

    pub fn is_empty(&self) -> bool {
        self.buckets.is_empty()
    }

    pub fn authors(&self) -> &'a [AuthorRecord] {
        self.authors
    }

    pub fn keys(&self, author: usize) -> &AuthorNameKeys {
        &self.keys[author]
    }

    pub fn lookup(&self, variant: &str) -> &[IndexEntry] {
        self.buckets.get(variant).map_or(&[], Vec::as_slice)
    }

    /// Entries whose surname variant starts with `prefix`.
    pub fn lookup_prefix<'s>(&'s self, prefix: &'s str) -> impl Iterator<Item = &'s IndexEntry> + 's {
        self.buckets
            .range::<str, _>((std::ops::Bound::Included(prefix), std::ops::Bound::Unbounded))
            .take_while(move |(k, _)| k.starts_with(prefix))
            .flat_map(|(_, v)| v.iter())
    }
}

/// Every segmentation of the account's display name, then of its handle.
pub fn account_hypotheses(account: &AccountRecord) -> Vec<ParsedName> {
    let mut h = parse_display_name(&account.display_name);
    h.extend(parse_handle(&account.handle));
    h
}

/// Combines per-hypothesis evidence into one record for the pair, or `None`
/// when no hypothesis reaches surname plus initial.
///
/// Positive flags are the maximum over the qualifying hypotheses; the absence
/// flag holds only if no hypothesis at all shows the author's first name.
pub fn best_evidence(keys: &AuthorNameKeys, hypotheses: &[ParsedName]) -> Option<MatchEvidence> {
    let all: Vec<MatchEvidence> = hypotheses.iter().map(|h| keys.compare(h)).collect();
    let qualifying: Vec<&MatchEvidence> = all.iter().filter(|e| e.satisfies_rule0()).collect();
    if qualifying.is_empty() {
        return None;
    }
    let first_name_match = qualifying.iter().any(|e| e.first_name_match);
    Some(MatchEvidence {
        surname_match: true,
        initial_match: true,
        full_name_match: qualifying.iter().any(|e| e.full_name_match),
        first_name_match,
        first_single_match: !first_name_match && qualifying.iter().any(|e| e.first_single_match),
        author_first_absent: all.iter().all(|e| e.author_first_absent),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidatePair {
    pub author_id: AuthorId,
    pub handle: String,
    pub evidence: MatchEvidence,
    pub author_index: usize,
    pub account_index: usize,
}

fn candidate_authors(index: &SurnameIndex<'_>, hypotheses: &[ParsedName]) -> Vec<usize> {
    let mut found = Vec::new();
    for h in hypotheses {
        let key = h.surname_key();
        if key.is_empty() {
            continue;
        }
        let initial = h.first_initial();
        let hit = |e: &IndexEntry| initial.is_some() && e.initial == initial;
        found.extend(index.lookup(&key).iter().filter(|e| hit(e)).map(|e| e.author));
        if h.truncated && key.chars().count() >= 2 {
            found.extend(index.lookup_prefix(&key).filter(|e| hit(e)).map(|e| e.author));
        }
    }
    found.sort_unstable();
    found.dedup();
    found
}

/// All rule-0 pairs, sorted by `(author_id, handle)`.
pub fn generate_candidates(accounts: &[AccountRecord], index: &SurnameIndex<'_>) -> Vec<CandidatePair> {
    let authors = index.authors();
    let mut pairs: Vec<CandidatePair> = accounts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(account_index, account)| {
            let hypotheses = account_hypotheses(account);
            candidate_authors(index, &hypotheses)
                .into_iter()
                .filter_map(|author_index| {
                    best_evidence(index.keys(author_index), &hypotheses).map(|evidence| CandidatePair {
                        author_id: authors[author_index].author_id.clone(),
                        handle: account.handle.clone(),
                        evidence,
                        author_index,
                        account_index,
                    })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    pairs.par_sort_unstable_by(|a, b| (&a.author_id, &a.handle).cmp(&(&b.author_id, &b.handle)));
    pairs
}

pub fn candidates_tsv(pairs: &[CandidatePair]) -> String {
    let mut out = String::from("author_id\thandle\tsurname\tinitial\tfull_name\tfirst_name\tfirst_single\tfirst_absent\n");
    for p in pairs {
        let e = &p.evidence;
        let flags = [
            e.surname_match,
            e.initial_match,
            e.full_name_match,
            e.first_name_match,
            e.first_single_match,
            e.author_first_absent,
        ];
        let _ = write!(out, "{}\t{}", p.author_id, p.handle);
        for f in flags {
            out.push('\t');
            out.push(if f { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

pub fn write_candidates(path: &Path, pairs: &[CandidatePair]) -> io::Result<()> {
    std::fs::write(path, candidates_tsv(pairs))
}
