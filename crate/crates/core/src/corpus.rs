//! Canonical data model, line-oriented loaders and corpus frequency tables.
//!
//! Authors and accounts are read from JSON-lines files (one object per line,
//! field names as in the structs below); the gold standard is a CSV file with
//! the header `author_id,handle`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::Datelike;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::namekit::{fold, normalize};

pub const MAX_HANDLE_LEN: usize = 15;
pub const MAX_DISPLAY_NAME_LEN: usize = 20;
pub const MIN_PUB_YEAR: i32 = 1980;

pub type PubId = String;
pub type JournalId = String;
pub type TopicId = String;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuthorId(pub String);

impl AuthorId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AuthorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for AuthorId {
    fn from(s: &str) -> Self {
        AuthorId(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Domain {
    SocialBehavioral,
    LawArtsHumanities,
    MedicalLife,
    Natural,
    Other,
}

impl Domain {
    pub const ALL: [Domain; 5] = [
        Domain::SocialBehavioral,
        Domain::LawArtsHumanities,
        Domain::MedicalLife,
        Domain::Natural,
        Domain::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Domain::SocialBehavioral => "SocialBehavioral",
            Domain::LawArtsHumanities => "LawArtsHumanities",
            Domain::MedicalLife => "MedicalLife",
            Domain::Natural => "Natural",
            Domain::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Affiliation {
    #[serde(default)]
    pub organization: String,
    #[serde(default)]
    pub city: String,
    #[serde(default)]
    pub country: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PubRef {
    pub pub_id: PubId,
    pub journal_id: JournalId,
    #[serde(default)]
    pub micro_topic_ids: BTreeSet<TopicId>,
    pub domain: Domain,
    pub year: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRecord {
    pub author_id: AuthorId,
    pub surname: String,
    /// First name as used on papers; `None` for initials-only authors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_name: Option<String>,
    pub initials: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub email_domain: Option<String>,
    #[serde(default)]
    pub affiliations: Vec<Affiliation>,
    #[serde(default)]
    pub publications: Vec<PubRef>,
    pub year_first_pub: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccountRecord {
    pub handle: String,
    #[serde(default)]
    pub display_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bio: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<String>,
    #[serde(default)]
    pub tweeted_pub_ids: BTreeSet<PubId>,
    /// Papers that appeared in a tweet mentioning this handle.
    #[serde(default)]
    pub comention_pub_ids: BTreeSet<PubId>,
}

impl AccountRecord {
    /// The display name sits exactly at the platform limit and may have been cut.
    pub fn display_truncated(&self) -> bool {
        self.display_name.chars().count() == MAX_DISPLAY_NAME_LEN
    }

    pub fn handle_key(&self) -> String {
        self.handle.to_ascii_lowercase()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GoldPair {
    pub author_id: AuthorId,
    pub handle: String,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed { path: PathBuf, line: usize, message: String },
    #[error("{path}:{line}: field `{field}`: {reason}")]
    InvalidField {
        path: PathBuf,
        line: usize,
        field: String,
        reason: String,
    },
    #[error("{path}:{line}: duplicate {kind} `{key}` (first seen on line {first_line})")]
    Duplicate {
        path: PathBuf,
        line: usize,
        kind: &'static str,
        key: String,
        first_line: usize,
    },
}

/// A record-level validation failure, positioned by the loader.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub field: &'static str,
    pub reason: String,
}

impl FieldError {
    fn new(field: &'static str, reason: impl Into<String>) -> Self {
        FieldError {
            field,
            reason: reason.into(),
        }
    }
}

fn blank_to_none(v: &mut Option<String>) {
    if v.as_deref().is_some_and(|s| s.trim().is_empty()) {
        *v = None;
    }
}

fn current_year() -> i32 {
    chrono::Utc::now().year()
}

impl AuthorRecord {
    pub fn validate(&mut self) -> Result<(), FieldError> {
        blank_to_none(&mut self.first_name);
        blank_to_none(&mut self.email_domain);
        if self.author_id.0.trim().is_empty() {
            return Err(FieldError::new("author_id", "empty"));
        }
        if normalize(&self.surname).is_empty() {
            return Err(FieldError::new("surname", "empty"));
        }
        if !self.initials.chars().any(char::is_alphabetic) {
            return Err(FieldError::new("initials", "must contain at least one letter"));
        }
        if let Some(i) = self
            .affiliations
            .iter()
            .position(|a| a.organization.trim().is_empty() && a.city.trim().is_empty() && a.country.trim().is_empty())
        {
            return Err(FieldError::new("affiliations", format!("entry {i} has no non-empty field")));
        }
        let max_year = current_year();
        let mut seen = HashSet::new();
        for p in &self.publications {
            if !seen.insert(p.pub_id.as_str()) {
                return Err(FieldError::new("publications", format!("duplicate pub_id `{}`", p.pub_id)));
            }
            if !(MIN_PUB_YEAR..=max_year).contains(&p.year) {
                return Err(FieldError::new(
                    "publications",
                    format!("year {} of `{}` outside [{MIN_PUB_YEAR}, {max_year}]", p.year, p.pub_id),
                ));
            }
        }
        if let Some(min) = self.publications.iter().map(|p| p.year).min() {
            if self.year_first_pub > min {
                return Err(FieldError::new(
                    "year_first_pub",
                    format!("{} is later than the earliest publication ({min})", self.year_first_pub),
                ));
            }
        }
        Ok(())
    }
}

pub fn is_valid_handle(handle: &str) -> bool {
    (1..=MAX_HANDLE_LEN).contains(&handle.len()) && handle.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl AccountRecord {
    pub fn validate(&mut self) -> Result<(), FieldError> {
        blank_to_none(&mut self.url);
        blank_to_none(&mut self.bio);
        blank_to_none(&mut self.location);
        if !is_valid_handle(&self.handle) {
            return Err(FieldError::new(
                "handle",
                format!("`{}` is not 1-{MAX_HANDLE_LEN} letters, digits or underscores", self.handle),
            ));
        }
        let len = self.display_name.chars().count();
        if len > MAX_DISPLAY_NAME_LEN {
            return Err(FieldError::new(
                "display_name",
                format!("{len} characters exceeds the limit of {MAX_DISPLAY_NAME_LEN}"),
            ));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}

fn parse_jsonl<T, V>(path: &Path, text: &str, validate: V) -> Result<Vec<(usize, T)>, CorpusError>
where
    T: DeserializeOwned + Send,
    V: Fn(&mut T) -> Result<(), FieldError> + Sync,
{
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let parsed: Vec<Result<(usize, T), CorpusError>> = lines
        .par_iter()
        .map(|&(line, raw)| {
            let mut record: T = serde_json::from_str(raw).map_err(|e| {
                let message = e.to_string();
                match missing_field(&message) {
                    Some(field) => CorpusError::InvalidField {
                        path: path.to_path_buf(),
                        line,
                        field: field.to_string(),
                        reason: "missing".into(),
                    },
                    None => CorpusError::Malformed {
                        path: path.to_path_buf(),
                        line,
                        message,
                    },
                }
            })?;
            validate(&mut record).map_err(|e| CorpusError::InvalidField {
                path: path.to_path_buf(),
                line,
                field: e.field.to_string(),
                reason: e.reason,
            })?;
            Ok((line, record))
        })
        .collect();
    parsed.into_iter().collect()
}

fn check_unique<T, K, F>(path: &Path, records: &[(usize, T)], kind: &'static str, key: F) -> Result<(), CorpusError>
where
    K: std::hash::Hash + Eq + fmt::Display,
    F: Fn(&T) -> K,
{
    let mut first: HashMap<K, usize> = HashMap::with_capacity(records.len());
    for (line, r) in records {
        let k = key(r);
        if let Some(&first_line) = first.get(&k) {
            return Err(CorpusError::Duplicate {
                path: path.to_path_buf(),
                line: *line,
                kind,
                key: k.to_string(),
                first_line,
            });
        }
        first.insert(k, *line);
    }
    Ok(())
}

pub fn parse_authors(path: &Path, text: &str) -> Result<Vec<AuthorRecord>, CorpusError> {
    let records = parse_jsonl(path, text, AuthorRecord::validate)?;
    check_unique(path, &records, "author_id", |r: &AuthorRecord| r.author_id.0.clone())?;
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

pub fn parse_accounts(path: &Path, text: &str) -> Result<Vec<AccountRecord>, CorpusError> {
    let records = parse_jsonl(path, text, AccountRecord::validate)?;
    check_unique(path, &records, "handle", AccountRecord::handle_key)?;
    Ok(records.into_iter().map(|(_, r)| r).collect())
}

pub fn load_authors(path: &Path) -> Result<Vec<AuthorRecord>, CorpusError> {
    parse_authors(path, &read_file(path)?)
}

pub fn load_accounts(path: &Path) -> Result<Vec<AccountRecord>, CorpusError> {
    parse_accounts(path, &read_file(path)?)
}

pub fn parse_gold(path: &Path, text: &str) -> Result<Vec<GoldPair>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let malformed = |line: usize, message: String| CorpusError::Malformed {
        path: path.to_path_buf(),
        line,
        message,
    };
    let headers = reader.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "author_id" || &headers[1] != "handle" {
        return Err(malformed(1, "expected header `author_id,handle`".into()));
    }
    let mut pairs = Vec::new();
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for result in reader.records() {
        let record = result.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let author_id = record.get(0).unwrap_or("");
        let handle = record.get(1).unwrap_or("").trim_start_matches('@');
        for (field, value) in [("author_id", author_id), ("handle", handle)] {
            if value.is_empty() {
                return Err(CorpusError::InvalidField {
                    path: path.to_path_buf(),
                    line,
                    field: field.into(),
                    reason: "empty".into(),
                });
            }
        }
        let key = (author_id.to_string(), handle.to_ascii_lowercase());
        if let Some(&first_line) = seen.get(&key) {
            return Err(CorpusError::Duplicate {
                path: path.to_path_buf(),
                line,
                kind: "gold pair",
                key: format!("{author_id},{handle}"),
                first_line,
            });
        }
        seen.insert(key, line);
        pairs.push(GoldPair {
            author_id: AuthorId::from(author_id),
            handle: handle.to_string(),
        });
    }
    Ok(pairs)
}

pub fn load_gold(path: &Path) -> Result<Vec<GoldPair>, CorpusError> {
    parse_gold(path, &read_file(path)?)
}

/// Normalized feature keys of one author, as counted by [`FrequencyTables`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureKeys {
    pub full_name: Option<String>,
    pub first_name: Option<String>,
    pub first_single_name: Option<String>,
    pub email_domain: Option<String>,
    pub organizations: BTreeSet<String>,
    pub cities: BTreeSet<String>,
    pub countries: BTreeSet<String>,
}

pub fn phrase_key(text: &str) -> Option<String> {
    let n = normalize(text);
    (!n.is_empty()).then(|| n.tokens.join(" "))
}

pub fn email_domain_key(domain: &str) -> Option<String> {
    let d = domain.trim().trim_start_matches('@').trim_end_matches('.').to_ascii_lowercase();
    let d = d.strip_prefix("www.").unwrap_or(&d).to_string();
    (!d.is_empty()).then_some(d)
}

impl FeatureKeys {
    pub fn of(author: &AuthorRecord) -> Self {
        let surname = normalize(&author.surname).tokens;
        let first = author
            .first_name
            .as_deref()
            .map(|f| normalize(f).tokens)
            .filter(|t| !t.is_empty());
        let full_name = match &first {
            Some(f) => Some(f.iter().chain(&surname).cloned().collect::<Vec<_>>().join(" ")),
            None => {
                let initials: String = fold(&author.initials).chars().filter(|c| c.is_alphabetic()).collect();
                Some(std::iter::once(initials).chain(surname.iter().cloned()).collect::<Vec<_>>().join(" "))
            }
        };
        let mut keys = FeatureKeys {
            full_name,
            first_name: first.as_ref().map(|f| f.join(" ")),
            first_single_name: first.as_ref().map(|f| f[0].clone()),
            email_domain: author.email_domain.as_deref().and_then(email_domain_key),
            ..FeatureKeys::default()
        };
        for a in &author.affiliations {
            keys.organizations.extend(phrase_key(&a.organization));
            keys.cities.extend(phrase_key(&a.city));
            keys.countries.extend(phrase_key(&a.country));
        }
        keys
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    FullName,
    FirstName,
    FirstSingleName,
    EmailDomain,
    Organization,
    City,
    Country,
}

impl Feature {
    pub const ALL: [Feature; 7] = [
        Feature::FullName,
        Feature::FirstName,
        Feature::FirstSingleName,
        Feature::EmailDomain,
        Feature::Organization,
        Feature::City,
        Feature::Country,
    ];
}

/// Number of distinct authors per normalized feature value.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTables {
    tables: [HashMap<String, u64>; 7],
}

fn feature_slot(f: Feature) -> usize {
    f as usize
}

impl FrequencyTables {
    pub fn build(authors: &[AuthorRecord]) -> Self {
        let tables = authors
            .par_iter()
            .fold(
                || [(); 7].map(|_| HashMap::new()),
                |mut acc: [HashMap<String, u64>; 7], author| {
                    let k = FeatureKeys::of(author);
                    let singles = [
                        (Feature::FullName, &k.full_name),
                        (Feature::FirstName, &k.first_name),
                        (Feature::FirstSingleName, &k.first_single_name),
                        (Feature::EmailDomain, &k.email_domain),
                    ];
                    for (f, v) in singles {
                        if let Some(v) = v {
                            *acc[feature_slot(f)].entry(v.clone()).or_insert(0) += 1;
                        }
                    }
                    let sets = [
                        (Feature::Organization, &k.organizations),
                        (Feature::City, &k.cities),
                        (Feature::Country, &k.countries),
                    ];
                    for (f, set) in sets {
                        for v in set {
                            *acc[feature_slot(f)].entry(v.clone()).or_insert(0) += 1;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || [(); 7].map(|_| HashMap::new()),
                |mut a, b| {
                    for (into, from) in a.iter_mut().zip(b) {
                        for (k, v) in from {
                            *into.entry(k).or_insert(0) += v;
                        }
                    }
                    a
                },
            );
        FrequencyTables { tables }
    }

    /// Count for a normalized key; zero when no author carries it.
    pub fn count(&self, feature: Feature, key: &str) -> u64 {
        self.tables[feature_slot(feature)].get(key).copied().unwrap_or(0)
    }

    pub fn table(&self, feature: Feature) -> &HashMap<String, u64> {
        &self.tables[feature_slot(feature)]
    }

    /// Builds tables from explicit counts; used for what-if scoring.
    pub fn from_counts<I>(counts: I) -> Self
    where
        I: IntoIterator<Item = (Feature, String, u64)>,
    {
        let mut t = FrequencyTables::default();
        for (f, k, n) in counts {
            t.tables[feature_slot(f)].insert(k, n);
        }
        t
    }
}

/// Journal and micro-topics of every publication known to the corpus.
#[derive(Debug, Clone, Default)]
pub struct PublicationCatalog {
    entries: HashMap<PubId, CatalogEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub journal_id: JournalId,
    pub micro_topic_ids: BTreeSet<TopicId>,
}

impl PublicationCatalog {
    /// First occurrence in author order wins when co-authors disagree.
    pub fn build(authors: &[AuthorRecord]) -> Self {
        let mut entries = HashMap::new();
        for p in authors.iter().flat_map(|a| &a.publications) {
            entries.entry(p.pub_id.clone()).or_insert_with(|| CatalogEntry {
                journal_id: p.journal_id.clone(),
                micro_topic_ids: p.micro_topic_ids.clone(),
            });
        }
        PublicationCatalog { entries }
    }

    pub fn get(&self, pub_id: &str) -> Option<&CatalogEntry> {
        self.entries.get(pub_id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
