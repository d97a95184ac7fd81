//! Additive rule scoring of candidate pairs, best-account selection and the
//! minimum-score cut.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    email_domain_key, AccountRecord, AuthorId, AuthorRecord, Feature, FeatureKeys, FrequencyTables,
    PublicationCatalog,
};
use crate::linker::CandidatePair;
use crate::namekit::{match_key, normalize, MatchEvidence};

pub const N_RULES: usize = 14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScoringError {
    #[error("rule {0} is not frequency-bracketed")]
    UnknownRule(u8),
    #[error("handle `{0}` has no candidate count")]
    MissingHandle(String),
    #[error("author `{0}` has no candidate count")]
    MissingAuthor(String),
    #[error("invalid rule configuration: {0}")]
    InvalidConfig(String),
}

/// Three-way bracket on a corpus frequency: counts above `frequent_above`
/// score `frequent_score`, counts below `rare_below` score `rare_score`, and
/// everything in between scores `medium_score`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrequencyBrackets {
    pub frequent_above: u64,
    pub rare_below: u64,
    pub frequent_score: i32,
    pub medium_score: i32,
    pub rare_score: i32,
}

impl FrequencyBrackets {
    const fn new(frequent_above: u64, rare_below: u64, scores: [i32; 3]) -> Self {
        FrequencyBrackets {
            frequent_above,
            rare_below,
            frequent_score: scores[0],
            medium_score: scores[1],
            rare_score: scores[2],
        }
    }

    pub fn score(&self, count: u64) -> i32 {
        if count > self.frequent_above {
            self.frequent_score
        } else if count < self.rare_below {
            self.rare_score
        } else {
            self.medium_score
        }
    }

    fn range(&self) -> (i32, i32) {
        let mut s = vec![self.frequent_score, self.rare_score];
        if self.rare_below <= self.frequent_above {
            s.push(self.medium_score);
        }
        (*s.iter().min().unwrap(), *s.iter().max().unwrap())
    }
}

/// Step function on a count: the score of the highest tier whose `min` the
/// count reaches, or 0 below the first tier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountTiers {
    pub min: Vec<u64>,
    pub score: Vec<i32>,
}

impl CountTiers {
    fn new(min: &[u64], score: &[i32]) -> Self {
        CountTiers {
            min: min.to_vec(),
            score: score.to_vec(),
        }
    }

    pub fn score(&self, count: u64) -> i32 {
        self.min
            .iter()
            .zip(&self.score)
            .rev()
            .find(|(m, _)| count >= **m)
            .map_or(0, |(_, s)| *s)
    }

    fn range(&self) -> (i32, i32) {
        let lo = self.score.iter().copied().chain([0]).min().unwrap();
        let hi = self.score.iter().copied().chain([0]).max().unwrap();
        (lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedScore {
    pub score: i32,
}

/// What the account/author commonness rule counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommonnessBasis {
    /// Distinct candidate authors sharing the handle.
    #[default]
    AuthorsPerAccount,
    /// Distinct candidate handles of the author.
    AccountsPerAuthor,
    /// The larger of the two counts.
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleConfig {
    pub rule0: FixedScore,
    pub rule1: FrequencyBrackets,
    pub rule2: FrequencyBrackets,
    pub rule3: FrequencyBrackets,
    pub rule4: FixedScore,
    pub rule5: FrequencyBrackets,
    pub rule6: FrequencyBrackets,
    pub rule7: FrequencyBrackets,
    pub rule8: FrequencyBrackets,
    pub rule9: CountTiers,
    pub rule10: CountTiers,
    pub rule11: FixedScore,
    pub rule12: CountTiers,
    pub rule13: CountTiers,
    pub commonness_basis: CommonnessBasis,
    pub min_total_score: i32,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            rule0: FixedScore { score: 1 },
            rule1: FrequencyBrackets::new(30, 5, [1, 2, 3]),
            rule2: FrequencyBrackets::new(145, 12, [1, 2, 3]),
            // 31 itself sits in neither stated range and goes to the frequent side.
            rule3: FrequencyBrackets::new(30, 31, [1, 2, 2]),
            rule4: FixedScore { score: -2 },
            rule5: FrequencyBrackets::new(187, 18, [1, 2, 3]),
            rule6: FrequencyBrackets::new(403, 20, [1, 2, 3]),
            rule7: FrequencyBrackets::new(5515, 210, [1, 2, 3]),
            rule8: FrequencyBrackets::new(76741, 76742, [1, 2, 2]),
            rule9: CountTiers::new(&[1, 3, 6], &[3, 5, 7]),
            rule10: CountTiers::new(&[1, 4, 7], &[1, 3, 5]),
            rule11: FixedScore { score: 5 },
            rule12: CountTiers::new(&[1, 6], &[1, 2]),
            rule13: CountTiers::new(&[1, 3, 7], &[2, 1, 0]),
            commonness_basis: CommonnessBasis::AuthorsPerAccount,
            min_total_score: 4,
        }
    }
}

fn merge(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl RuleConfig {
    /// Overlays user keys onto the defaults; unknown keys are rejected.
    pub fn from_overrides(overrides: toml::Table) -> Result<Self, ScoringError> {
        let mut base = toml::Value::try_from(RuleConfig::default()).expect("default config serializes");
        merge(&mut base, toml::Value::Table(overrides));
        let cfg: RuleConfig = base.try_into().map_err(|e: toml::de::Error| ScoringError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ScoringError> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ScoringError::InvalidConfig(e.to_string()))?;
        Self::from_overrides(table)
    }

    pub fn brackets(&self, rule: u8) -> Result<&FrequencyBrackets, ScoringError> {
        Ok(match rule {
            1 => &self.rule1,
            2 => &self.rule2,
            3 => &self.rule3,
            5 => &self.rule5,
            6 => &self.rule6,
            7 => &self.rule7,
            8 => &self.rule8,
            _ => return Err(ScoringError::UnknownRule(rule)),
        })
    }

    pub fn validate(&self) -> Result<(), ScoringError> {
        for rule in [1, 2, 3, 5, 6, 7, 8] {
            let b = self.brackets(rule)?;
            if b.rare_below > b.frequent_above.saturating_add(1) {
                return Err(ScoringError::InvalidConfig(format!(
                    "rule{rule}: rare_below {} overlaps frequent_above {}",
                    b.rare_below, b.frequent_above
                )));
            }
        }
        let tiers = [(9, &self.rule9), (10, &self.rule10), (12, &self.rule12), (13, &self.rule13)];
        for (rule, t) in tiers {
            let ordered = t.min.windows(2).all(|w| w[0] < w[1]);
            if t.min.is_empty() || t.min.len() != t.score.len() || !ordered || t.min[0] == 0 {
                return Err(ScoringError::InvalidConfig(format!(
                    "rule{rule}: `min` must be strictly increasing positive counts, one per score"
                )));
            }
        }
        Ok(())
    }

    /// Per-rule `(min, max)` score ranges.
    pub fn rule_ranges(&self) -> [(i32, i32); N_RULES] {
        let fixed = |s: i32| (s.min(0), s.max(0));
        [
            (self.rule0.score, self.rule0.score),
            self.rule1.range_with_zero(),
            self.rule2.range_with_zero(),
            self.rule3.range_with_zero(),
            fixed(self.rule4.score),
            self.rule5.range_with_zero(),
            self.rule6.range_with_zero(),
            self.rule7.range_with_zero(),
            self.rule8.range_with_zero(),
            self.rule9.range(),
            self.rule10.range(),
            fixed(self.rule11.score),
            self.rule12.range(),
            self.rule13.range(),
        ]
    }

    /// Sum of the per-rule extremes; every total lies within it.
    pub fn score_bounds(&self) -> (i32, i32) {
        self.rule_ranges()
            .iter()
            .fold((0, 0), |(lo, hi), (a, b)| (lo + a, hi + b))
    }
}

impl FrequencyBrackets {
    fn range_with_zero(&self) -> (i32, i32) {
        let (lo, hi) = self.range();
        (lo.min(0), hi.max(0))
    }
}

pub fn freq_bucket(rule: u8, count: u64, config: &RuleConfig) -> Result<i32, ScoringError> {
    Ok(config.brackets(rule)?.score(count))
}

/// Rules 0 to 4.
pub fn score_name_rules(
    evidence: &MatchEvidence,
    author: &AuthorRecord,
    tables: &FrequencyTables,
    config: &RuleConfig,
) -> [i32; 5] {
    name_rules(evidence, &FeatureKeys::of(author), tables, config)
}

fn name_rules(evidence: &MatchEvidence, keys: &FeatureKeys, tables: &FrequencyTables, config: &RuleConfig) -> [i32; 5] {
    let count = |f: Feature, k: &Option<String>| k.as_deref().map_or(0, |k| tables.count(f, k));
    let mut s = [config.rule0.score, 0, 0, 0, 0];
    if evidence.full_name_match {
        s[1] = config.rule1.score(count(Feature::FullName, &keys.full_name));
    }
    if evidence.first_name_match {
        s[2] = config.rule2.score(count(Feature::FirstName, &keys.first_name));
    } else if evidence.first_single_match {
        s[3] = config.rule3.score(count(Feature::FirstSingleName, &keys.first_single_name));
    }
    if evidence.author_first_absent {
        s[4] = config.rule4.score;
    }
    s
}

const SECOND_LEVEL_LABELS: [&str; 8] = ["ac", "co", "com", "edu", "gov", "net", "org", "or"];

/// The registrable part of a host name, e.g. `uni-x.nl` for `cs.uni-x.nl`
/// and `ox.ac.uk` for `www.cs.ox.ac.uk`.
pub fn registrable_domain(host: &str) -> &str {
    let labels: Vec<&str> = host.split('.').collect();
    let n = labels.len();
    if n <= 2 {
        return host;
    }
    let country_second_level = labels[n - 1].len() == 2 && SECOND_LEVEL_LABELS.contains(&labels[n - 2]);
    let keep = if country_second_level { 3 } else { 2 };
    if n <= keep {
        return host;
    }
    let skip: usize = labels[..n - keep].iter().map(|l| l.len() + 1).sum();
    &host[skip..]
}

pub fn url_host(url: &str) -> Option<String> {
    let s = url.trim();
    let s = s.split_once("://").map_or(s, |(_, rest)| rest);
    let host = s.split(['/', '?', '#']).next()?;
    let host = host.rsplit_once('@').map_or(host, |(_, h)| h);
    let host = host.split(':').next()?.trim_end_matches('.').to_ascii_lowercase();
    let host = host.strip_prefix("www.").map(str::to_string).unwrap_or(host);
    (host.contains('.')).then_some(host)
}

fn host_within(host: &str, domain: &str) -> bool {
    host == domain || host.strip_suffix(domain).is_some_and(|rest| rest.ends_with('.'))
}

pub fn url_matches_email_domain(url: &str, email_domain: &str) -> bool {
    match (url_host(url), email_domain_key(email_domain)) {
        (Some(host), Some(domain)) => host_matches_domain(&host, &domain),
        _ => false,
    }
}

fn host_matches_domain(host: &str, domain: &str) -> bool {
    host_within(host, domain) || host_within(host, registrable_domain(domain))
}

fn text_keys(text: Option<&str>) -> Vec<String> {
    text.map(|t| normalize(t).match_keys()).unwrap_or_default()
}

fn contains_phrase(haystack: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty() && haystack.windows(phrase.len()).any(|w| w == phrase)
}

/// Author-side inputs to the rules, derived once per author.
#[derive(Debug, Clone)]
struct AuthorProfile {
    keys: FeatureKeys,
    /// Organization, city and country phrases with their match-key tokens.
    places: [Vec<(String, Vec<String>)>; 3],
    own_pubs: HashSet<String>,
    topics: HashSet<String>,
    journals: HashSet<String>,
}

impl AuthorProfile {
    fn of(author: &AuthorRecord) -> Self {
        let keys = FeatureKeys::of(author);
        let tokens = |set: &BTreeSet<String>| -> Vec<(String, Vec<String>)> {
            set.iter().map(|p| (p.clone(), p.split(' ').map(match_key).collect())).collect()
        };
        let places = [tokens(&keys.organizations), tokens(&keys.cities), tokens(&keys.countries)];
        let pubs = &author.publications;
        AuthorProfile {
            places,
            own_pubs: pubs.iter().map(|p| p.pub_id.clone()).collect(),
            topics: pubs.iter().flat_map(|p| p.micro_topic_ids.iter().cloned()).collect(),
            journals: pubs.iter().map(|p| p.journal_id.clone()).collect(),
            keys,
        }
    }
}

/// Account-side inputs to the rules, derived once per account.
#[derive(Debug, Clone)]
struct AccountProfile {
    url_host: Option<String>,
    bio: Vec<String>,
    location: Vec<String>,
}

impl AccountProfile {
    fn of(account: &AccountRecord) -> Self {
        AccountProfile {
            url_host: account.url.as_deref().and_then(url_host),
            bio: text_keys(account.bio.as_deref()),
            location: text_keys(account.location.as_deref()),
        }
    }
}

/// Rules 5 to 8.
pub fn score_profile_rules(
    author: &AuthorRecord,
    account: &AccountRecord,
    tables: &FrequencyTables,
    config: &RuleConfig,
) -> [i32; 4] {
    profile_rules(&AuthorProfile::of(author), &AccountProfile::of(account), tables, config)
}

fn profile_rules(author: &AuthorProfile, account: &AccountProfile, tables: &FrequencyTables, config: &RuleConfig) -> [i32; 4] {
    let mut s = [0; 4];
    if let (Some(host), Some(domain)) = (account.url_host.as_deref(), author.keys.email_domain.as_deref()) {
        if host_matches_domain(host, domain) {
            s[0] = config.rule5.score(tables.count(Feature::EmailDomain, domain));
        }
    }
    if account.bio.is_empty() && account.location.is_empty() {
        return s;
    }
    let groups = [
        (Feature::Organization, &config.rule6),
        (Feature::City, &config.rule7),
        (Feature::Country, &config.rule8),
    ];
    for (slot, (feature, brackets)) in groups.into_iter().enumerate() {
        s[slot + 1] = author.places[slot]
            .iter()
            .filter(|(_, phrase)| contains_phrase(&account.bio, phrase) || contains_phrase(&account.location, phrase))
            .map(|(p, _)| brackets.score(tables.count(feature, p)))
            .max()
            .unwrap_or(0);
    }
    s
}

/// Rules 9 to 12. Topics and journals of papers the author did not write are
/// looked up in `catalog`.
pub fn score_activity_rules(
    author: &AuthorRecord,
    account: &AccountRecord,
    catalog: &PublicationCatalog,
    config: &RuleConfig,
) -> [i32; 4] {
    activity_rules(&AuthorProfile::of(author), account, catalog, config)
}

fn activity_rules(
    author: &AuthorProfile,
    account: &AccountRecord,
    catalog: &PublicationCatalog,
    config: &RuleConfig,
) -> [i32; 4] {
    let own = |id: &String| author.own_pubs.contains(id);
    let self_tweets = account.tweeted_pub_ids.iter().filter(|id| own(id)).count();
    let mut shared_topics = BTreeSet::new();
    let mut shared_journals = BTreeSet::new();
    for id in account.tweeted_pub_ids.iter().filter(|id| !own(id)) {
        if let Some(entry) = catalog.get(id) {
            shared_topics.extend(entry.micro_topic_ids.iter().filter(|t| author.topics.contains(*t)));
            if author.journals.contains(&entry.journal_id) {
                shared_journals.insert(&entry.journal_id);
            }
        }
    }
    let comentioned = account.comention_pub_ids.iter().any(own);
    [
        config.rule9.score(self_tweets as u64),
        config.rule10.score(shared_topics.len() as u64),
        if comentioned { config.rule11.score } else { 0 },
        config.rule12.score(shared_journals.len() as u64),
    ]
}

/// Distinct candidate partners per handle and per author, taken over the full
/// candidate set before any selection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CommonnessCounts {
    pub authors_per_handle: HashMap<String, u64>,
    pub handles_per_author: HashMap<AuthorId, u64>,
}

impl CommonnessCounts {
    pub fn from_candidates(pairs: &[CandidatePair]) -> Self {
        let mut distinct: BTreeSet<(&AuthorId, String)> = BTreeSet::new();
        for p in pairs {
            distinct.insert((&p.author_id, p.handle.to_ascii_lowercase()));
        }
        let mut c = CommonnessCounts::default();
        for (a, h) in distinct {
            *c.authors_per_handle.entry(h).or_insert(0) += 1;
            *c.handles_per_author.entry(a.clone()).or_insert(0) += 1;
        }
        c
    }
}

/// Rule 13.
pub fn score_commonness(
    author_id: &AuthorId,
    handle: &str,
    counts: &CommonnessCounts,
    config: &RuleConfig,
) -> Result<i32, ScoringError> {
    let per_handle = || {
        counts
            .authors_per_handle
            .get(&handle.to_ascii_lowercase())
            .copied()
            .ok_or_else(|| ScoringError::MissingHandle(handle.to_string()))
    };
    let per_author = || {
        counts
            .handles_per_author
            .get(author_id)
            .copied()
            .ok_or_else(|| ScoringError::MissingAuthor(author_id.to_string()))
    };
    let n = match config.commonness_basis {
        CommonnessBasis::AuthorsPerAccount => per_handle()?,
        CommonnessBasis::AccountsPerAuthor => per_author()?,
        CommonnessBasis::Max => per_handle()?.max(per_author()?),
    };
    Ok(config.rule13.score(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScoredPair {
    pub author_id: AuthorId,
    pub handle: String,
    pub rule_scores: [i32; N_RULES],
    pub total: i32,
}

impl ScoredPair {
    pub fn new(author_id: AuthorId, handle: String, rule_scores: [i32; N_RULES]) -> Self {
        ScoredPair {
            author_id,
            handle,
            rule_scores,
            total: rule_scores.iter().sum(),
        }
    }
}

/// Read-only inputs shared by every pair, with per-author and per-account
/// derived keys computed up front.
#[derive(Debug, Clone)]
pub struct ScoringContext<'a> {
    pub authors: &'a [AuthorRecord],
    pub accounts: &'a [AccountRecord],
    pub tables: &'a FrequencyTables,
    pub catalog: &'a PublicationCatalog,
    pub config: &'a RuleConfig,
    author_profiles: Vec<AuthorProfile>,
    account_profiles: Vec<AccountProfile>,
}

impl<'a> ScoringContext<'a> {
    pub fn new(
        authors: &'a [AuthorRecord],
        accounts: &'a [AccountRecord],
        tables: &'a FrequencyTables,
        catalog: &'a PublicationCatalog,
        config: &'a RuleConfig,
    ) -> Self {
        ScoringContext {
            authors,
            accounts,
            tables,
            catalog,
            config,
            author_profiles: authors.par_iter().map(AuthorProfile::of).collect(),
            account_profiles: accounts.par_iter().map(AccountProfile::of).collect(),
        }
    }
}

pub fn score_pair(
    pair: &CandidatePair,
    ctx: &ScoringContext<'_>,
    counts: &CommonnessCounts,
) -> Result<ScoredPair, ScoringError> {
    let author = &ctx.author_profiles[pair.author_index];
    let account = &ctx.account_profiles[pair.account_index];
    let mut s = [0; N_RULES];
    s[0..5].copy_from_slice(&name_rules(&pair.evidence, &author.keys, ctx.tables, ctx.config));
    s[5..9].copy_from_slice(&profile_rules(author, account, ctx.tables, ctx.config));
    s[9..13].copy_from_slice(&activity_rules(author, &ctx.accounts[pair.account_index], ctx.catalog, ctx.config));
    s[13] = score_commonness(&pair.author_id, &pair.handle, counts, ctx.config)?;
    Ok(ScoredPair::new(pair.author_id.clone(), pair.handle.clone(), s))
}

/// Scores every candidate; output keeps the `(author_id, handle)` order.
pub fn score_candidates(pairs: &[CandidatePair], ctx: &ScoringContext<'_>) -> Result<Vec<ScoredPair>, ScoringError> {
    let counts = CommonnessCounts::from_candidates(pairs);
    let mut scored = pairs
        .par_iter()
        .map(|p| score_pair(p, ctx, &counts))
        .collect::<Result<Vec<_>, _>>()?;
    scored.par_sort_unstable_by(|a, b| (&a.author_id, &a.handle).cmp(&(&b.author_id, &b.handle)));
    Ok(scored)
}

/// Keeps, per author, every pair at that author's highest total.
pub fn apply_preferred_rule(scored: Vec<ScoredPair>) -> Vec<ScoredPair> {
    let mut best: BTreeMap<AuthorId, i32> = BTreeMap::new();
    for p in &scored {
        best.entry(p.author_id.clone())
            .and_modify(|m| *m = (*m).max(p.total))
            .or_insert(p.total);
    }
    let mut kept: Vec<ScoredPair> = scored.into_iter().filter(|p| best[&p.author_id] == p.total).collect();
    kept.sort_by(|a, b| (&a.author_id, &a.handle).cmp(&(&b.author_id, &b.handle)));
    kept
}

/// Pairs that survived selection and the minimum-score cut.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchSet {
    pub pairs: Vec<ScoredPair>,
}

impl MatchSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn matched_authors(&self) -> BTreeSet<&AuthorId> {
        self.pairs.iter().map(|p| &p.author_id).collect()
    }
}

pub fn filter_threshold(selected: &[ScoredPair], min_total_score: i32) -> MatchSet {
    MatchSet {
        pairs: selected.iter().filter(|p| p.total >= min_total_score).cloned().collect(),
    }
}

pub const PAIRS_HEADER: &str =
    "author_id\thandle\tr0\tr1\tr2\tr3\tr4\tr5\tr6\tr7\tr8\tr9\tr10\tr11\tr12\tr13\ttotal";

pub fn pairs_tsv(pairs: &[ScoredPair]) -> String {
    let mut out = String::with_capacity(64 * (pairs.len() + 1));
    out.push_str(PAIRS_HEADER);
    out.push('\n');
    for p in pairs {
        out.push_str(p.author_id.as_str());
        out.push('\t');
        out.push_str(&p.handle);
        for s in p.rule_scores {
            out.push('\t');
            out.push_str(&s.to_string());
        }
        out.push('\t');
        out.push_str(&p.total.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Affiliation, Domain, PubRef};
    use proptest::prelude::*;

    fn author(first: Option<&str>) -> AuthorRecord {
        AuthorRecord {
            author_id: AuthorId::from("a1"),
            surname: "Silva".into(),
            first_name: first.map(Into::into),
            initials: "M".into(),
            email_domain: Some("uni-x.nl".into()),
            affiliations: vec![Affiliation {
                organization: "Leiden University".into(),
                city: "Leiden".into(),
                country: "Netherlands".into(),
            }],
            publications: Vec::new(),
            year_first_pub: 2000,
        }
    }

    fn account() -> AccountRecord {
        AccountRecord {
            handle: "msilva".into(),
            display_name: "Maria Silva".into(),
            url: None,
            bio: None,
            location: None,
            tweeted_pub_ids: BTreeSet::new(),
            comention_pub_ids: BTreeSet::new(),
        }
    }

    fn pubref(id: &str, journal: &str, topics: &[&str]) -> PubRef {
        PubRef {
            pub_id: id.into(),
            journal_id: journal.into(),
            micro_topic_ids: topics.iter().map(|t| t.to_string()).collect(),
            domain: Domain::Natural,
            year: 2010,
        }
    }

    #[test]
    fn bucket_examples() {
        let c = RuleConfig::default();
        assert_eq!(freq_bucket(1, 3, &c), Ok(3));
        assert_eq!(freq_bucket(2, 145, &c), Ok(2));
        assert_eq!(freq_bucket(7, 6000, &c), Ok(1));
        assert_eq!(freq_bucket(3, 31, &c), Ok(1));
        assert_eq!(freq_bucket(3, 30, &c), Ok(2));
        assert_eq!(freq_bucket(8, 76742, &c), Ok(1));
        assert_eq!(freq_bucket(8, 76741, &c), Ok(2));
        assert_eq!(freq_bucket(9, 1, &c), Err(ScoringError::UnknownRule(9)));
    }

    #[test]
    fn tier_examples() {
        let c = RuleConfig::default();
        assert_eq!(c.rule9.score(6), 7);
        assert_eq!(c.rule9.score(0), 0);
        assert_eq!(c.rule10.score(5), 3);
        assert_eq!(c.rule12.score(5), 1);
        assert_eq!(c.rule12.score(6), 2);
        assert_eq!(c.rule13.score(1), 2);
        assert_eq!(c.rule13.score(4), 1);
        assert_eq!(c.rule13.score(9), 0);
    }

    #[test]
    fn default_bounds() {
        assert_eq!(RuleConfig::default().score_bounds(), (-1, 41));
    }

    #[test]
    fn name_rules_full_match() {
        let a = author(Some("Maria"));
        let tables = FrequencyTables::from_counts([
            (Feature::FullName, "maria silva".to_string(), 4),
            (Feature::FirstName, "maria".to_string(), 500),
        ]);
        let e = MatchEvidence {
            surname_match: true,
            initial_match: true,
            full_name_match: true,
            first_name_match: true,
            ..Default::default()
        };
        assert_eq!(score_name_rules(&e, &a, &tables, &RuleConfig::default()), [1, 3, 1, 0, 0]);
    }

    #[test]
    fn name_rules_penalty_and_initials_only() {
        let tables = FrequencyTables::default();
        let e = MatchEvidence {
            surname_match: true,
            initial_match: true,
            author_first_absent: true,
            ..Default::default()
        };
        let s = score_name_rules(&e, &author(Some("Maria")), &tables, &RuleConfig::default());
        assert_eq!(s, [1, 0, 0, 0, -2]);
        assert_eq!(s.iter().sum::<i32>(), -1);
        let e = MatchEvidence {
            surname_match: true,
            initial_match: true,
            ..Default::default()
        };
        assert_eq!(score_name_rules(&e, &author(None), &tables, &RuleConfig::default()), [1, 0, 0, 0, 0]);
    }

    #[test]
    fn email_url_rule() {
        let mut acc = account();
        acc.url = Some("https://www.uni-x.nl/people/silva".into());
        let tables = FrequencyTables::from_counts([(Feature::EmailDomain, "uni-x.nl".to_string(), 10)]);
        let s = score_profile_rules(&author(None), &acc, &tables, &RuleConfig::default());
        assert_eq!(s, [3, 0, 0, 0]);
        assert!(url_matches_email_domain("http://uni-x.nl", "cs.uni-x.nl"));
        assert!(url_matches_email_domain("people.ox.ac.uk/x", "ox.ac.uk"));
        assert!(!url_matches_email_domain("http://cam.ac.uk", "ox.ac.uk"));
        assert!(!url_matches_email_domain("http://notuni-x.nl", "uni-x.nl"));
        assert!(!url_matches_email_domain("http://other.ac.ke", "cs.uon.ac.ke"));
        assert_eq!(registrable_domain("mail.uon.ac.ke"), "uon.ac.ke");
        assert_eq!(registrable_domain("ac.uk"), "ac.uk");
    }

    #[test]
    fn bio_rules_take_whole_token_phrases() {
        let mut acc = account();
        acc.bio = Some("Prof at Leiden University, Netherlands".into());
        let tables = FrequencyTables::from_counts([
            (Feature::Organization, "leiden university".to_string(), 2000),
            (Feature::City, "leiden".to_string(), 100),
            (Feature::Country, "netherlands".to_string(), 90000),
        ]);
        let s = score_profile_rules(&author(None), &acc, &tables, &RuleConfig::default());
        // "Leiden" also occurs as a whole token, so the city rule fires too.
        assert_eq!(s, [0, 1, 3, 1]);
        acc.bio = Some("Leidenuniversity fan".into());
        assert_eq!(score_profile_rules(&author(None), &acc, &tables, &RuleConfig::default()), [0; 4]);
    }

    #[test]
    fn empty_profile_scores_nothing() {
        let tables = FrequencyTables::build(&[author(None)]);
        assert_eq!(score_profile_rules(&author(None), &account(), &tables, &RuleConfig::default()), [0; 4]);
    }

    #[test]
    fn activity_rules() {
        let mut a = author(None);
        a.publications = (0..6).map(|i| pubref(&format!("p{i}"), "j1", &["t1"])).collect();
        let mut acc = account();
        acc.tweeted_pub_ids = (0..6).map(|i| format!("p{i}")).collect();
        let catalog = PublicationCatalog::build(&[a.clone()]);
        let c = RuleConfig::default();
        assert_eq!(score_activity_rules(&a, &acc, &catalog, &c), [7, 0, 0, 0]);

        let mut other = author(None);
        other.author_id = AuthorId::from("a2");
        other.publications = vec![
            pubref("q1", "j1", &["t1", "t2", "t3"]),
            pubref("q2", "j9", &["t4", "t5", "t99"]),
        ];
        a.publications[0].micro_topic_ids = ["t1", "t2", "t3", "t4", "t5"].iter().map(|s| s.to_string()).collect();
        let catalog = PublicationCatalog::build(&[a.clone(), other]);
        acc.tweeted_pub_ids = ["q1", "q2"].iter().map(|s| s.to_string()).collect();
        acc.comention_pub_ids = ["p3".to_string()].into();
        assert_eq!(score_activity_rules(&a, &acc, &catalog, &c), [0, 3, 5, 1]);
    }

    #[test]
    fn commonness() {
        let c = RuleConfig::default();
        let mut counts = CommonnessCounts::default();
        counts.authors_per_handle.insert("x".into(), 4);
        counts.handles_per_author.insert(AuthorId::from("a"), 1);
        assert_eq!(score_commonness(&AuthorId::from("a"), "X", &counts, &c), Ok(1));
        assert!(matches!(
            score_commonness(&AuthorId::from("a"), "y", &counts, &c),
            Err(ScoringError::MissingHandle(_))
        ));
        let per_author = RuleConfig {
            commonness_basis: CommonnessBasis::AccountsPerAuthor,
            ..RuleConfig::default()
        };
        assert_eq!(score_commonness(&AuthorId::from("a"), "x", &counts, &per_author), Ok(2));
    }

    #[test]
    fn score_pair_totals() {
        let sp = ScoredPair::new(AuthorId::from("a"), "h".into(), [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(sp.total, 1);
        let sp = ScoredPair::new(AuthorId::from("a"), "h".into(), [1, 3, 0, 0, 0, 0, 0, 0, 0, 5, 0, 0, 0, 2]);
        assert_eq!(sp.total, 11);
    }

    fn sp(author: &str, handle: &str, total: i32) -> ScoredPair {
        let mut s = [0; N_RULES];
        s[0] = total;
        ScoredPair::new(AuthorId::from(author), handle.into(), s)
    }

    #[test]
    fn preferred_rule_examples() {
        assert_eq!(apply_preferred_rule(vec![sp("A", "t1", 9), sp("A", "t2", 7)]), vec![sp("A", "t1", 9)]);
        assert_eq!(apply_preferred_rule(vec![sp("A", "t2", 9), sp("A", "t1", 9)]).len(), 2);
        assert_eq!(apply_preferred_rule(vec![sp("A", "t1", 3)]), vec![sp("A", "t1", 3)]);
    }

    #[test]
    fn threshold_examples() {
        let pairs = vec![sp("a", "x", 4), sp("b", "x", 3), sp("c", "x", 6)];
        let kept: Vec<i32> = filter_threshold(&pairs, 4).pairs.iter().map(|p| p.total).collect();
        assert_eq!(kept, vec![4, 6]);
        assert!(filter_threshold(&pairs, 2).len() >= filter_threshold(&pairs, 6).len());
    }

    #[test]
    fn config_overrides_merge_into_defaults() {
        let c = RuleConfig::from_toml_str("min_total_score = 6\nrule1.frequent_above = 40\n").unwrap();
        assert_eq!(c.min_total_score, 6);
        assert_eq!(c.rule1.frequent_above, 40);
        assert_eq!(c.rule1.rare_below, 5);
        assert_eq!(c.rule2, RuleConfig::default().rule2);
        assert!(RuleConfig::from_toml_str("rule1.bogus = 1").is_err());
        assert!(RuleConfig::from_toml_str("rule1.rare_below = 100").is_err());
        assert!(RuleConfig::from_toml_str("rule9.min = [3, 1, 6]").is_err());
        let per_author = RuleConfig::from_toml_str("commonness_basis = \"accounts_per_author\"").unwrap();
        assert_eq!(per_author.commonness_basis, CommonnessBasis::AccountsPerAuthor);
    }

    #[test]
    fn pairs_tsv_layout() {
        let tsv = pairs_tsv(&[sp("a1", "h", 5)]);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0].split('\t').count(), 17);
        assert_eq!(lines[1], "a1\th\t5\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\t5");
    }

    proptest! {
        #[test]
        fn preferred_rule_keeps_exactly_the_maxima(
            rows in proptest::collection::vec((0u8..8, 0u8..6, -1i32..42), 0..40)
        ) {
            let pairs: Vec<ScoredPair> = rows
                .iter()
                .map(|(a, h, t)| sp(&format!("a{a}"), &format!("h{h}"), *t))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let kept = apply_preferred_rule(pairs.clone());
            for p in &pairs {
                let max = pairs.iter().filter(|q| q.author_id == p.author_id).map(|q| q.total).max().unwrap();
                prop_assert_eq!(kept.contains(p), p.total == max);
            }
        }

        #[test]
        fn brackets_are_monotone(a in 0u64..200_000, b in 0u64..200_000) {
            let c = RuleConfig::default();
            let (lo, hi) = (a.min(b), a.max(b));
            for rule in [1, 2, 3, 5, 6, 7, 8] {
                prop_assert!(freq_bucket(rule, lo, &c).unwrap() >= freq_bucket(rule, hi, &c).unwrap());
            }
        }
    }
}
