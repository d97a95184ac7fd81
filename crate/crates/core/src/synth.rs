//! Seeded synthetic corpora with known author/account links.
//!
//! Names are drawn from Zipf-weighted lists so that common names are shared
//! by many authors while the tail stays unique. Linked accounts show their
//! owner's name, tweet the owner's papers and papers of the owner's field,
//! and sometimes mention the owner's institution, city or e-mail host.

use std::collections::{BTreeSet, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    AccountRecord, Affiliation, AuthorId, AuthorRecord, Domain, GoldPair, PubRef, MAX_DISPLAY_NAME_LEN,
    MAX_HANDLE_LEN,
};
use crate::namekit::fold;

const FIRST_NAMES: &[&str] = &[
    "Maria", "John", "David", "Anna", "Michael", "Laura", "Peter", "Sarah", "Thomas", "Elena", "James", "Julia",
    "Robert", "Sofia", "Daniel", "Emma", "Paul", "Clara", "Mark", "Marta", "Andrea", "Lucas", "Ines", "Javier",
    "Carlos", "Ana", "Jürgen", "José", "Björn", "Søren", "Zoë", "Ingrid", "Hiroshi", "Yuki", "Wei", "Mei", "Ravi",
    "Priya", "Olga", "Ivan", "Katrin", "Stefan", "Nadia", "Omar", "Fatima", "Pierre", "Amélie", "François", "Hélène",
    "Giulia", "Marco", "Matteo", "Chiara", "Lars", "Astrid", "Niels", "Karin", "Tomás", "Joaquín", "Agnes", "Bruno",
    "Camille", "Dirk", "Edith", "Felix", "Greta", "Hugo", "Irene", "Jonas", "Kai", "Lena", "Mateo", "Nora", "Oscar",
    "Pilar", "Rafael", "Selma", "Tobias", "Ulrike", "Vera", "Wouter", "Xavier", "Yasmin", "Zeynep", "Bernd",
    "Mónica", "Raúl", "Gaëlle", "Dagmar", "Rune",
];

const SURNAMES: &[&str] = &[
    "Smith", "Garcia", "Müller", "Wang", "Silva", "Jansen", "Rossi", "Kim", "Martin", "Schmidt", "Johnson", "Li",
    "Sánchez", "de Vries", "Brown", "Santos", "Nielsen", "Novak", "Dubois", "Schröder", "Gómez", "Pérez", "Ferrari",
    "Andersen", "Bakker", "Visser", "Costa", "Kowalski", "Nagy", "Popescu", "Yamamoto", "Tanaka", "Chen", "Patel",
    "Singh", "Ivanova", "Petrov", "Fischer", "Weber", "Meyer", "Wagner", "Becker", "Hoffmann", "Schulz", "Koch",
    "Richter", "Wolf", "Jönsson", "Østergaard", "Lindqvist", "Virtanen", "Korhonen", "Horváth", "Dvořák",
    "Jiménez", "Ortega", "Delgado", "Castillo", "Navarro", "Romero", "Alonso", "Gutiérrez", "Lefèvre",
    "Moreau", "Girard", "Fontaine", "Bianchi", "Romano", "Colombo", "Ricci", "Marino", "Greco", "Bruno", "Gallo",
    "Conti", "Esposito", "O'Brien", "MacLeod", "Murphy", "Kelly", "Walsh", "Byrne", "Ryan", "Doyle", "Nakamura",
    "Kobayashi", "Watanabe", "Saito", "Zhang", "Liu", "Huang", "Zhao", "Wu", "Zhou", "Sun", "Ma", "Gupta", "Sharma",
    "Kumar", "Reddy", "Rao", "Iyer", "Okafor", "Mensah", "Diallo", "Haddad", "Nasser", "Yilmaz", "Kaya", "Demir",
    "Çelik", "Şahin", "Öztürk", "Papadopoulos", "Nikolaidis", "Economou", "Lambert", "Mercier", "Blanc", "Guerin",
    "Boucher", "Fournier", "Hughes", "Clarke", "Foster", "Palmer", "Ellis", "Hayes", "Sutherland", "Abernathy",
    "Quintero", "Valenzuela", "Ibáñez", "Ferreira", "Carvalho", "Araújo", "Gonçalves", "Lindgren", "Sandberg",
    "Eriksson", "Håkansson", "Brandt", "Vogel", "Krüger", "Zimmermann", "Kühn", "Baumgärtner", "Van den Berg",
    "Van Dijk", "Hendriks", "Dekker", "Mulder", "Smit", "Vermeulen",
];

const CITIES: &[(&str, &str, &str)] = &[
    ("Leiden", "Netherlands", "nl"),
    ("Delft", "Netherlands", "nl"),
    ("Utrecht", "Netherlands", "nl"),
    ("Madrid", "Spain", "es"),
    ("Granada", "Spain", "es"),
    ("Barcelona", "Spain", "es"),
    ("Porto", "Portugal", "pt"),
    ("Lisbon", "Portugal", "pt"),
    ("München", "Germany", "de"),
    ("Köln", "Germany", "de"),
    ("Berlin", "Germany", "de"),
    ("Zürich", "Switzerland", "ch"),
    ("Lyon", "France", "fr"),
    ("Paris", "France", "fr"),
    ("Milan", "Italy", "it"),
    ("Bologna", "Italy", "it"),
    ("Oxford", "United Kingdom", "ac.uk"),
    ("Leeds", "United Kingdom", "ac.uk"),
    ("Boston", "United States", "edu"),
    ("Chicago", "United States", "edu"),
    ("Seattle", "United States", "edu"),
    ("Toronto", "Canada", "ca"),
    ("Montréal", "Canada", "ca"),
    ("São Paulo", "Brazil", "br"),
    ("Kyoto", "Japan", "ac.jp"),
    ("Tokyo", "Japan", "ac.jp"),
    ("Melbourne", "Australia", "edu.au"),
    ("Beijing", "China", "edu.cn"),
    ("Shanghai", "China", "edu.cn"),
    ("Bangalore", "India", "ac.in"),
    ("Stockholm", "Sweden", "se"),
    ("Göteborg", "Sweden", "se"),
    ("Helsinki", "Finland", "fi"),
    ("Praha", "Czechia", "cz"),
    ("Kraków", "Poland", "pl"),
    ("Istanbul", "Turkey", "edu.tr"),
    ("Athens", "Greece", "gr"),
    ("Nairobi", "Kenya", "ac.ke"),
    ("Accra", "Ghana", "edu.gh"),
    ("Santiago", "Chile", "cl"),
];

const ORG_PATTERNS: &[&str] = &["University of {}", "{} Institute of Technology", "{} Medical Center"];

const FIELD_WORDS: &[&str] = &[
    "ecology", "genomics", "sociology", "linguistics", "oncology", "optics", "economics", "history", "robotics",
    "neuroscience", "law", "philosophy", "chemistry", "immunology", "astronomy", "psychology",
];

const ROLES: &[&str] = &["Professor", "Researcher", "PhD student", "Postdoc", "Lecturer", "Scientist"];

const ORG_ACCOUNT_WORDS: &[&str] = &["News", "Lab", "Journal", "Society", "Daily", "Digest", "Network", "Hub"];

/// Relative weights of handle construction styles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HandleStyleMix {
    /// `maria_silva`
    pub underscore: f64,
    /// `MariaSilva`
    pub camel: f64,
    /// `msilva`
    pub initial_surname: f64,
    /// `mariasilva`
    pub lowercase_full: f64,
    /// `silva_lab42`
    pub surname_digits: f64,
    /// a handle with no name material
    pub unrelated: f64,
}

impl HandleStyleMix {
    pub fn clean() -> Self {
        HandleStyleMix {
            underscore: 1.0,
            camel: 1.0,
            initial_surname: 0.0,
            lowercase_full: 0.0,
            surname_digits: 0.0,
            unrelated: 0.0,
        }
    }

    fn weights(&self) -> [f64; 6] {
        [
            self.underscore,
            self.camel,
            self.initial_surname,
            self.lowercase_full,
            self.surname_digits,
            self.unrelated,
        ]
    }
}

impl Default for HandleStyleMix {
    fn default() -> Self {
        HandleStyleMix {
            underscore: 0.25,
            camel: 0.25,
            initial_surname: 0.2,
            lowercase_full: 0.15,
            surname_digits: 0.1,
            unrelated: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Display name shows initials instead of the first name.
    pub initials_only_prob: f64,
    /// Diacritics in the display name are folded or expanded.
    pub diacritic_prob: f64,
    /// Display name is decorated with a title and cut at the length limit.
    pub truncation_prob: f64,
    pub handle_style_mix: HandleStyleMix,
}

impl NoiseModel {
    pub fn none() -> Self {
        NoiseModel {
            initials_only_prob: 0.0,
            diacritic_prob: 0.0,
            truncation_prob: 0.0,
            handle_style_mix: HandleStyleMix::clean(),
        }
    }
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            initials_only_prob: 0.15,
            diacritic_prob: 0.3,
            truncation_prob: 0.1,
            handle_style_mix: HandleStyleMix::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub n_authors: usize,
    pub n_accounts: usize,
    pub fraction_linked: f64,
    pub noise: NoiseModel,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            n_authors: 5000,
            n_accounts: 1000,
            fraction_linked: 0.5,
            noise: NoiseModel::default(),
            seed: 42,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("{field} = {value} is outside [0, 1]")]
    Probability { field: &'static str, value: f64 },
    #[error("handle style weights must be non-negative with a positive sum")]
    StyleWeights,
    #[error("{linked} linked accounts need at least as many authors, got {authors}")]
    TooFewAuthors { linked: usize, authors: usize },
}

impl SynthSpec {
    pub fn n_linked(&self) -> usize {
        (self.fraction_linked * self.n_accounts as f64).round() as usize
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let probs = [
            ("fraction_linked", self.fraction_linked),
            ("initials_only_prob", self.noise.initials_only_prob),
            ("diacritic_prob", self.noise.diacritic_prob),
            ("truncation_prob", self.noise.truncation_prob),
        ];
        for (field, value) in probs {
            if !(0.0..=1.0).contains(&value) {
                return Err(SynthError::Probability { field, value });
            }
        }
        let w = self.noise.handle_style_mix.weights();
        if w.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
            return Err(SynthError::StyleWeights);
        }
        if self.n_linked() > self.n_authors {
            return Err(SynthError::TooFewAuthors {
                linked: self.n_linked(),
                authors: self.n_authors,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub authors: Vec<AuthorRecord>,
    pub accounts: Vec<AccountRecord>,
    pub gold: Vec<GoldPair>,
}

struct Institution {
    affiliation: Affiliation,
    domain: String,
}

struct Field {
    domain: Domain,
    journals: Vec<String>,
    topics: Vec<String>,
    word: &'static str,
}

struct World {
    fields: Vec<Field>,
    institutions: Vec<Institution>,
    institution_pick: WeightedIndex<f64>,
    first_pick: WeightedIndex<f64>,
    surname_pick: WeightedIndex<f64>,
    pubs_pick: WeightedIndex<f64>,
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|r| 1.0 / (r as f64).powf(s))).expect("positive weights")
}

const N_FIELDS: usize = 24;
const MAX_PUBS: usize = 80;
const LAST_PUB_YEAR: i32 = 2020;

fn ascii_slug(text: &str) -> String {
    fold(text).chars().filter(char::is_ascii_alphanumeric).collect()
}

impl World {
    fn new(rng: &mut ChaCha8Rng) -> Self {
        let domains = [
            Domain::SocialBehavioral,
            Domain::LawArtsHumanities,
            Domain::MedicalLife,
            Domain::MedicalLife,
            Domain::Natural,
            Domain::Natural,
            Domain::Other,
        ];
        let fields = (0..N_FIELDS)
            .map(|f| Field {
                domain: domains[f % domains.len()],
                journals: (0..6).map(|j| format!("J{f:02}{j}")).collect(),
                topics: (0..8).map(|t| format!("T{f:02}{t}")).collect(),
                word: FIELD_WORDS[f % FIELD_WORDS.len()],
            })
            .collect();
        let mut institutions = Vec::new();
        for &(city, country, tld) in CITIES {
            let n_orgs = rng.gen_range(1..=ORG_PATTERNS.len());
            for pattern in &ORG_PATTERNS[..n_orgs] {
                let organization = pattern.replace("{}", city);
                let initials: String = organization
                    .split_whitespace()
                    .filter(|w| w.chars().next().is_some_and(char::is_uppercase))
                    .map(|w| w.chars().next().unwrap())
                    .collect();
                let domain = format!("{}-{}.{tld}", initials.to_ascii_lowercase(), ascii_slug(city).to_lowercase());
                institutions.push(Institution {
                    affiliation: Affiliation {
                        organization,
                        city: city.to_string(),
                        country: country.to_string(),
                    },
                    domain: ascii_slug_domain(&domain),
                });
            }
        }
        institutions.shuffle(rng);
        World {
            institution_pick: zipf(institutions.len(), 1.0),
            fields,
            institutions,
            first_pick: zipf(FIRST_NAMES.len(), 0.9),
            surname_pick: zipf(SURNAMES.len(), 0.9),
            pubs_pick: zipf(MAX_PUBS, 1.2),
        }
    }
}

fn ascii_slug_domain(d: &str) -> String {
    d.chars().filter(|c| c.is_ascii_alphanumeric() || *c == '.' || *c == '-').collect()
}

fn initial_of(name: &str) -> String {
    name.chars().next().map(|c| c.to_uppercase().collect()).unwrap_or_default()
}

struct NameParts {
    first: Option<String>,
    initials: String,
    surname: String,
}

fn draw_name(world: &World, rng: &mut ChaCha8Rng, initials_only: bool) -> NameParts {
    let mut surname = SURNAMES[world.surname_pick.sample(rng)].to_string();
    if rng.gen_bool(0.05) {
        let second = SURNAMES[world.surname_pick.sample(rng)];
        if second != surname && !second.contains(' ') && !surname.contains(' ') {
            surname = format!("{surname}-{second}");
        }
    }
    let mut first = FIRST_NAMES[world.first_pick.sample(rng)].to_string();
    if rng.gen_bool(0.08) {
        let second = FIRST_NAMES[world.first_pick.sample(rng)];
        if second != first {
            first = format!("{first} {second}");
        }
    }
    // Keep the plain display form within the platform limit.
    while first.chars().count() + 1 + surname.chars().count() > MAX_DISPLAY_NAME_LEN {
        match first.split_once(' ') {
            Some((head, _)) => first = head.to_string(),
            None => match surname.split_once('-') {
                Some((head, _)) => surname = head.to_string(),
                None => break,
            },
        }
    }
    let mut initials: String = first.split(' ').map(initial_of).collect();
    if rng.gen_bool(0.25) {
        initials.push_str(&initial_of(FIRST_NAMES[rng.gen_range(0..FIRST_NAMES.len())]));
    }
    NameParts {
        first: (!initials_only).then_some(first),
        initials,
        surname,
    }
}

fn gen_authors(world: &World, rng: &mut ChaCha8Rng, n: usize) -> (Vec<AuthorRecord>, Vec<usize>) {
    let mut authors = Vec::with_capacity(n);
    let mut main_fields = Vec::with_capacity(n);
    let mut next_pub = 0usize;
    for i in 0..n {
        let initials_only = rng.gen_bool(0.1);
        let name = draw_name(world, rng, initials_only);
        let yfp = rng.gen_range(1980..=2015);
        let n_pubs = world.pubs_pick.sample(rng) + 1;
        let main = rng.gen_range(0..N_FIELDS);
        let publications = (0..n_pubs)
            .map(|k| {
                let f = if rng.gen_bool(0.85) { main } else { rng.gen_range(0..N_FIELDS) };
                let field = &world.fields[f];
                let n_topics = rng.gen_range(1..=2);
                let micro_topic_ids: BTreeSet<String> =
                    field.topics.choose_multiple(rng, n_topics).cloned().collect();
                next_pub += 1;
                PubRef {
                    pub_id: format!("P{next_pub:07}"),
                    journal_id: field.journals.choose(rng).unwrap().clone(),
                    micro_topic_ids,
                    domain: field.domain,
                    year: if k == 0 { yfp } else { rng.gen_range(yfp..=LAST_PUB_YEAR) },
                }
            })
            .collect();
        let n_affs = if rng.gen_bool(0.8) { 1 } else { 2 };
        let mut inst: Vec<usize> = (0..n_affs).map(|_| world.institution_pick.sample(rng)).collect();
        inst.dedup();
        let email_domain = match rng.gen_range(0..10) {
            0..=4 => Some(world.institutions[inst[0]].domain.clone()),
            5..=6 => Some(format!("{}.{}", ["cs", "med", "mail"][rng.gen_range(0..3)], world.institutions[inst[0]].domain)),
            7 => Some("gmail.com".to_string()),
            _ => None,
        };
        authors.push(AuthorRecord {
            author_id: AuthorId(format!("A{i:06}")),
            surname: name.surname,
            first_name: name.first,
            initials: name.initials,
            email_domain,
            affiliations: inst.iter().map(|&k| world.institutions[k].affiliation.clone()).collect(),
            publications,
            year_first_pub: yfp,
        });
        main_fields.push(main);
    }
    (authors, main_fields)
}

fn expand_umlauts(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            'ä' => out.push_str("ae"),
            'ö' | 'ø' => out.push_str("oe"),
            'ü' => out.push_str("ue"),
            'Ä' => out.push_str("Ae"),
            'Ö' | 'Ø' => out.push_str("Oe"),
            'Ü' => out.push_str("Ue"),
            _ => out.push(c),
        }
    }
    out
}

/// `fold` lowercases; this keeps the original capitalization.
fn strip_marks_keep_case(s: &str) -> String {
    s.chars()
        .map(|c| {
            let f: String = fold(&c.to_string());
            if c.is_uppercase() {
                f.to_uppercase()
            } else {
                f
            }
        })
        .collect()
}

fn cut(s: &str, max: usize) -> String {
    s.chars().take(max).collect()
}

fn dotted_initials(initials: &str) -> String {
    initials.chars().map(|c| format!("{c}.")).collect()
}

fn display_for(parts: &NameParts, noise: &NoiseModel, rng: &mut ChaCha8Rng) -> String {
    let given = match &parts.first {
        Some(f) if !rng.gen_bool(noise.initials_only_prob) => f.clone(),
        _ => dotted_initials(&parts.initials),
    };
    let mut name = format!("{given} {}", parts.surname);
    if rng.gen_bool(noise.diacritic_prob) {
        name = if rng.gen_bool(0.5) {
            strip_marks_keep_case(&name)
        } else {
            expand_umlauts(&name)
        };
    }
    if rng.gen_bool(noise.truncation_prob) {
        name = format!("{} {name}", ["Prof.", "Dr.", "Prof. Dr."][rng.gen_range(0..3)]);
    }
    cut(&name, MAX_DISPLAY_NAME_LEN)
}

fn handle_word(s: &str) -> String {
    ascii_slug(s)
}

fn camel(s: &str) -> String {
    s.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(|w| {
            let w = ascii_slug(w);
            let mut cs = w.chars();
            cs.next()
                .map(|c| c.to_ascii_uppercase().to_string() + cs.as_str())
                .unwrap_or_default()
        })
        .collect()
}

fn handle_for(parts: &NameParts, mix: &HandleStyleMix, rng: &mut ChaCha8Rng, taken: &HashSet<String>) -> String {
    let styles = WeightedIndex::new(mix.weights()).expect("validated weights");
    let first = parts.first.clone().unwrap_or_else(|| parts.initials.clone());
    let first_word = handle_word(first.split(' ').next().unwrap_or(""));
    let surname = handle_word(&parts.surname);
    let initial = parts.initials.chars().next().map(|c| c.to_ascii_lowercase()).unwrap_or('x');
    let base = match styles.sample(rng) {
        0 => format!("{}_{}", first_word, surname).to_lowercase(),
        1 => camel(&first) + &camel(&parts.surname),
        2 => format!("{initial}{surname}").to_lowercase(),
        3 => format!("{first_word}{surname}").to_lowercase(),
        4 => format!("{}_{}{}", surname.to_lowercase(), ["lab", "sci", "phd"][rng.gen_range(0..3)], rng.gen_range(1..99)),
        _ => format!("{}{}", ORG_ACCOUNT_WORDS[rng.gen_range(0..ORG_ACCOUNT_WORDS.len())], rng.gen_range(100..999)),
    };
    unique_handle(&base, taken)
}

fn unique_handle(base: &str, taken: &HashSet<String>) -> String {
    let base: String = base
        .chars()
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .take(MAX_HANDLE_LEN)
        .collect();
    let base = if base.is_empty() { "user".to_string() } else { base };
    if !taken.contains(&base.to_ascii_lowercase()) {
        return base;
    }
    (2..)
        .map(|n| {
            let suffix = n.to_string();
            let keep = MAX_HANDLE_LEN - suffix.len();
            format!("{}{suffix}", cut(&base, keep))
        })
        .find(|h| !taken.contains(&h.to_ascii_lowercase()))
        .expect("unbounded suffixes")
}

fn bio_for(aff: &Affiliation, field_word: &str, rng: &mut ChaCha8Rng) -> String {
    let role = ROLES[rng.gen_range(0..ROLES.len())];
    match rng.gen_range(0..4) {
        0 => format!("{role} at {}", aff.organization),
        1 => format!("{role} in {field_word}, {}", aff.city),
        2 => format!("{role} of {field_word} | {}, {}", aff.organization, aff.country),
        _ => format!("{role}. Views my own. {field_word} enthusiast"),
    }
}

/// Generates a corpus; identical specs give identical corpora.
pub fn generate(spec: &SynthSpec) -> Result<SynthCorpus, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let world = World::new(&mut rng);
    let (authors, main_fields) = gen_authors(&world, &mut rng, spec.n_authors);

    let mut field_pubs: Vec<Vec<(usize, &str)>> = vec![Vec::new(); N_FIELDS];
    let mut all_pubs: Vec<&str> = Vec::new();
    for (i, a) in authors.iter().enumerate() {
        for p in &a.publications {
            field_pubs[main_fields[i]].push((i, &p.pub_id));
            all_pubs.push(&p.pub_id);
        }
    }

    let n_linked = spec.n_linked();
    let owners: Vec<usize> = if n_linked == 0 {
        Vec::new()
    } else {
        rand::seq::index::sample(&mut rng, spec.n_authors, n_linked).into_vec()
    };
    let mut taken: HashSet<String> = HashSet::new();
    let mut accounts = Vec::with_capacity(spec.n_accounts);
    let mut gold = Vec::with_capacity(n_linked);

    for &owner in &owners {
        let a = &authors[owner];
        let parts = NameParts {
            first: a.first_name.clone(),
            initials: a.initials.clone(),
            surname: a.surname.clone(),
        };
        let display_name = display_for(&parts, &spec.noise, &mut rng);
        let handle = handle_for(&parts, &spec.noise.handle_style_mix, &mut rng, &taken);
        taken.insert(handle.to_ascii_lowercase());

        let own: Vec<&str> = a.publications.iter().map(|p| p.pub_id.as_str()).collect();
        let k_self = (1 + rng.gen_range(0..4) + rng.gen_range(0..4)).min(own.len());
        let mut tweeted: BTreeSet<String> = own.choose_multiple(&mut rng, k_self).map(|s| s.to_string()).collect();
        let peers = &field_pubs[main_fields[owner]];
        for _ in 0..rng.gen_range(0..=10) {
            if let Some(&(who, id)) = peers.choose(&mut rng) {
                if who != owner {
                    tweeted.insert(id.to_string());
                }
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            tweeted.insert(all_pubs.choose(&mut rng).unwrap().to_string());
        }
        let comention_pub_ids = if rng.gen_bool(0.3) {
            own.choose(&mut rng).map(|s| s.to_string()).into_iter().collect()
        } else {
            BTreeSet::new()
        };
        let aff = a.affiliations[0].clone();
        let field_word = world.fields[main_fields[owner]].word;
        let bio = rng.gen_bool(0.6).then(|| bio_for(&aff, field_word, &mut rng));
        let location = rng.gen_bool(0.5).then(|| {
            if rng.gen_bool(0.6) {
                format!("{}, {}", aff.city, aff.country)
            } else {
                aff.country.clone()
            }
        });
        let url = match &a.email_domain {
            Some(d) if d != "gmail.com" && rng.gen_bool(0.3) => {
                Some(format!("https://www.{d}/~{}", handle_word(&a.surname).to_lowercase()))
            }
            _ => None,
        };
        gold.push(GoldPair {
            author_id: a.author_id.clone(),
            handle: handle.clone(),
        });
        accounts.push(AccountRecord {
            handle,
            display_name,
            url,
            bio,
            location,
            tweeted_pub_ids: tweeted,
            comention_pub_ids,
        });
    }

    for _ in n_linked..spec.n_accounts {
        let person = rng.gen_bool(0.7);
        let (display_name, handle) = if person {
            let parts = draw_name(&world, &mut rng, false);
            let display = display_for(&parts, &spec.noise, &mut rng);
            let handle = handle_for(&parts, &spec.noise.handle_style_mix, &mut rng, &taken);
            (display, handle)
        } else {
            let word = world.fields[rng.gen_range(0..N_FIELDS)].word;
            let kind = ORG_ACCOUNT_WORDS[rng.gen_range(0..ORG_ACCOUNT_WORDS.len())];
            let display = cut(&format!("{} {kind}", camel(word)), MAX_DISPLAY_NAME_LEN);
            let handle = unique_handle(&format!("{word}{}", kind.to_lowercase()), &taken);
            (display, handle)
        };
        taken.insert(handle.to_ascii_lowercase());
        let tweeted: BTreeSet<String> = (0..rng.gen_range(1..=10))
            .map(|_| all_pubs.choose(&mut rng).unwrap().to_string())
            .collect();
        let inst = &world.institutions[world.institution_pick.sample(&mut rng)];
        let word = world.fields[rng.gen_range(0..N_FIELDS)].word;
        let bio = rng.gen_bool(0.4).then(|| bio_for(&inst.affiliation, word, &mut rng));
        let location = rng.gen_bool(0.4).then(|| inst.affiliation.country.clone());
        accounts.push(AccountRecord {
            handle,
            display_name,
            url: None,
            bio,
            location,
            tweeted_pub_ids: tweeted,
            comention_pub_ids: BTreeSet::new(),
        });
    }
    accounts.shuffle(&mut rng);
    gold.sort();
    Ok(SynthCorpus { authors, accounts, gold })
}

pub fn to_jsonl<T: Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn gold_csv(gold: &[GoldPair]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["author_id", "handle"]).expect("in-memory write");
    for g in gold {
        w.write_record([g.author_id.as_str(), g.handle.as_str()]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}
