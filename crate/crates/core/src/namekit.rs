//! Name normalization and template-based segmentation of display names and
//! handles.
//!
//! Comparisons run on *match keys*: a token is lowercased, diacritics are
//! folded and the digraphs `ae`, `oe` and `ue` are contracted, so `Müller`,
//! `Mueller` and `Muller` all share the key `muller`. Surnames compare on the
//! concatenation of their token keys, which makes hyphens, spaces and plain
//! juxtaposition interchangeable (`Sanchez-Gil`, `Sanchez Gil`, `SanchezGil`).

use std::collections::BTreeSet;

use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{AuthorRecord, MAX_DISPLAY_NAME_LEN};

/// Tokens removed from either end of a name. Whole-token match only.
pub const TITLE_LEXICON: [&str; 7] = ["dr", "prof", "phd", "md", "mr", "ms", "mrs"];

/// Lowercased, diacritic-folded tokens of a piece of text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedText {
    pub tokens: Vec<String>,
    /// Equivalent spellings per token, e.g. `{"muller", "mueller"}` for `Müller`.
    pub variant_sets: Vec<BTreeSet<String>>,
    surfaces: Vec<String>,
}

impl NormalizedText {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Lowercase text (diacritics kept) that normalizes back to `self`.
    pub fn render(&self) -> String {
        self.surfaces.join(" ")
    }

    pub fn match_keys(&self) -> Vec<String> {
        self.tokens.iter().map(|t| contract(t)).collect()
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '.' | '\'' | '\u{2019}' | '`' | '\u{b4}')
}

/// Lowercases, drops periods and apostrophes, and splits on whitespace,
/// hyphens and any other punctuation.
pub fn normalize(raw: &str) -> NormalizedText {
    let mut surfaces = Vec::new();
    let mut current = String::new();
    for c in raw.nfc().flat_map(char::to_lowercase) {
        if is_joiner(c) || is_combining_mark(c) {
            continue;
        } else if c.is_alphanumeric() {
            current.push(c);
        } else if !current.is_empty() {
            surfaces.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        surfaces.push(current);
    }
    surfaces.retain(|s| !fold_lower(s, false).is_empty());
    let tokens = surfaces.iter().map(|s| fold_lower(s, false)).collect();
    let variant_sets = surfaces.iter().map(|s| variants(s)).collect();
    NormalizedText {
        tokens,
        variant_sets,
        surfaces,
    }
}

fn special_fold(c: char, expand: bool) -> Option<&'static str> {
    let s = match c {
        'ä' => {
            if expand {
                "ae"
            } else {
                "a"
            }
        }
        'ö' | 'ø' => {
            if expand {
                "oe"
            } else {
                "o"
            }
        }
        'ü' => {
            if expand {
                "ue"
            } else {
                "u"
            }
        }
        'æ' => "ae",
        'œ' => "oe",
        'ß' => "ss",
        'ł' => "l",
        'đ' | 'ð' => "d",
        'þ' => "th",
        'ı' => "i",
        _ => return None,
    };
    Some(s)
}

fn fold_lower(lower: &str, expand: bool) -> String {
    let mut out = String::with_capacity(lower.len());
    for c in lower.chars() {
        match special_fold(c, expand) {
            Some(rep) => out.push_str(rep),
            None => out.extend(std::iter::once(c).nfd().filter(|d| !is_combining_mark(*d))),
        }
    }
    out
}

/// Lowercase and strip diacritics (`ü` becomes `u`).
pub fn fold(text: &str) -> String {
    let lower: String = text.nfc().flat_map(char::to_lowercase).collect();
    fold_lower(&lower, false)
}

fn contract(folded: &str) -> String {
    let mut s = folded.to_string();
    loop {
        let next = s.replace("ae", "a").replace("oe", "o").replace("ue", "u");
        if next == s {
            return s;
        }
        s = next;
    }
}

/// Comparison key of a single token.
pub fn match_key(token: &str) -> String {
    contract(&fold(token))
}

fn variants(surface: &str) -> BTreeSet<String> {
    let base = fold_lower(surface, false);
    let mut set = BTreeSet::new();
    set.insert(contract(&base));
    set.insert(fold_lower(surface, true));
    set.insert(base);
    set
}

/// Surname lookup keys: the concatenated folded, umlaut-expanded and
/// contracted spellings.
pub fn surname_variants(surname: &str) -> BTreeSet<String> {
    let norm = normalize(surname);
    let mut set = BTreeSet::new();
    if norm.is_empty() {
        return set;
    }
    set.insert(norm.tokens.concat());
    set.insert(norm.surfaces.iter().map(|s| fold_lower(s, true)).collect());
    set.insert(norm.match_keys().concat());
    set
}

fn is_title_token(token: &str) -> bool {
    TITLE_LEXICON.contains(&token)
}

/// Removes title tokens from both ends of a normalized token list.
pub fn strip_titles(tokens: &[String]) -> Vec<String> {
    let start = tokens
        .iter()
        .position(|t| !is_title_token(t))
        .unwrap_or(tokens.len());
    let end = tokens
        .iter()
        .rposition(|t| !is_title_token(t))
        .map_or(start, |i| i + 1);
    tokens[start..end].to_vec()
}

/// Format template that produced a [`ParsedName`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateId {
    /// `X.X. Xxx`
    DottedInitialsSurname,
    /// `XX Xxx`
    CapitalInitialsSurname,
    /// `Xx Xxx`
    ShortGivenSurname,
    /// `Xxx Xxx`
    GivenSurname,
    /// `Xxx X. Xxx`
    GivenInitialSurname,
    /// `Xxx Xxx-Xxx`
    GivenHyphenatedSurname,
    /// `Xxx, Xxx`
    SurnameCommaGiven,
    /// `Xxx X.`
    SurnameInitials,
    /// `Xxx` alone
    SingleToken,
    /// `Xxx Yyy` read as surname first
    InvertedGivenSurname,
    /// last token is the surname, everything before it is given material
    FallbackLastSurname,
    /// first token is the given name, the rest a compound surname
    FallbackDoubleSurname,
    HandleUnderscore,
    HandleCamelCase,
    HandleInverted,
    HandleInitialPrefix,
    HandleGivenPrefix,
    HandleInitialSuffix,
    HandleSurnameOnly,
}

impl TemplateId {
    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::DottedInitialsSurname => "X.X. Xxx",
            TemplateId::CapitalInitialsSurname => "XX Xxx",
            TemplateId::ShortGivenSurname => "Xx Xxx",
            TemplateId::GivenSurname => "Xxx Xxx",
            TemplateId::GivenInitialSurname => "Xxx X. Xxx",
            TemplateId::GivenHyphenatedSurname => "Xxx Xxx-Xxx",
            TemplateId::SurnameCommaGiven => "Xxx, Xxx",
            TemplateId::SurnameInitials => "Xxx X.",
            TemplateId::SingleToken => "Xxx",
            TemplateId::InvertedGivenSurname => "Yyy Xxx",
            TemplateId::FallbackLastSurname => "... Xxx",
            TemplateId::FallbackDoubleSurname => "Xxx Yyy Zzz",
            TemplateId::HandleUnderscore => "xxx_yyy",
            TemplateId::HandleCamelCase => "XxxYyy",
            TemplateId::HandleInverted => "yyy_xxx",
            TemplateId::HandleInitialPrefix => "xyyy",
            TemplateId::HandleGivenPrefix => "xxxyyy",
            TemplateId::HandleInitialSuffix => "yyyx",
            TemplateId::HandleSurnameOnly => "yyy",
        }
    }
}

/// One segmentation hypothesis for a display name or handle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedName {
    pub given_tokens: Vec<String>,
    /// Lowercase initial letters; empty when the name carried none.
    pub initials: String,
    pub surname_tokens: Vec<String>,
    pub template_id: TemplateId,
    pub truncated: bool,
}

impl ParsedName {
    fn new(
        given_tokens: Vec<String>,
        initials: String,
        surname_tokens: Vec<String>,
        template_id: TemplateId,
    ) -> Self {
        ParsedName {
            given_tokens,
            initials,
            surname_tokens,
            template_id,
            truncated: false,
        }
    }

    pub fn first_initial(&self) -> Option<char> {
        self.initials
            .chars()
            .next()
            .or_else(|| self.given_tokens.first().and_then(|t| t.chars().next()))
    }

    pub fn surname_key(&self) -> String {
        self.surname_tokens.iter().map(|t| match_key(t)).collect()
    }

    fn same_reading(&self, other: &ParsedName) -> bool {
        self.given_tokens == other.given_tokens
            && self.initials == other.initials
            && self.surname_tokens == other.surname_tokens
    }
}

#[derive(Debug, Clone)]
enum Piece {
    Initials { letters: String, dotted: bool, vowel: bool },
    Word { tokens: Vec<String>, short_given: bool },
}

impl Piece {
    fn initial_letters(&self) -> String {
        match self {
            Piece::Initials { letters, .. } => letters.clone(),
            Piece::Word { tokens, .. } => tokens.iter().filter_map(|t| t.chars().next()).collect(),
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

fn clean_raw(word: &str) -> &str {
    word.trim_start_matches(|c: char| !c.is_alphanumeric())
        .trim_end_matches(|c: char| !c.is_alphanumeric() && c != '.')
}

/// `M.C.Silva` becomes `M.C.` and `Silva`.
fn split_glued_initials(word: &str) -> Vec<&str> {
    if let Some(i) = word.rfind('.') {
        let (head, tail) = word.split_at(i + 1);
        let head_is_initials = head
            .split('.')
            .filter(|p| !p.is_empty())
            .all(|p| p.chars().count() == 1);
        if head_is_initials && tail.chars().filter(|c| c.is_alphabetic()).count() >= 2 {
            return vec![head, tail];
        }
    }
    vec![word]
}

/// Whitespace-separated name words, cut at the first token that clearly
/// starts non-name material (`|`, `@handle`, `(she/her)`, digits, a comma).
/// The flag reports a leading `Surname,` form.
fn display_words(display: &str) -> (Vec<String>, bool) {
    let mut words: Vec<String> = Vec::new();
    let mut comma_inverted = false;
    for w in display.split_whitespace() {
        let stops = w.starts_with(['(', '@', '#', '|']) || w.chars().any(|c| c.is_numeric());
        let cleaned = clean_raw(w);
        if stops || !cleaned.chars().any(char::is_alphabetic) {
            if words.is_empty() {
                continue;
            }
            break;
        }
        for part in split_glued_initials(cleaned) {
            words.push(part.to_string());
        }
        if w.trim_end_matches(|c: char| !c.is_alphanumeric() && c != ',').ends_with(',') {
            if words.len() == 1 {
                comma_inverted = true;
            } else {
                break;
            }
        }
    }
    (words, comma_inverted)
}

fn is_raw_title(word: &str, trailing: bool) -> bool {
    let key: String = word.chars().filter(|c| *c != '.').collect::<String>().to_lowercase();
    if !is_title_token(&key) {
        return false;
    }
    word.chars().any(char::is_lowercase) || (trailing && (key == "phd" || key == "md"))
}

fn strip_raw_titles(mut words: Vec<String>) -> Vec<String> {
    while words.len() > 1 && is_raw_title(&words[0], false) {
        words.remove(0);
    }
    while words.len() > 1 && is_raw_title(words.last().unwrap(), true) {
        words.pop();
    }
    words
}

fn classify(word: &str, is_last: bool) -> Option<Piece> {
    let letters: Vec<char> = word.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.is_empty() {
        return None;
    }
    let folded_letters = || fold(&letters.iter().collect::<String>());
    let dotted = word.contains('.')
        && word
            .split('.')
            .filter(|p| !p.is_empty())
            .all(|p| p.chars().count() == 1 && p.chars().all(char::is_alphabetic));
    if dotted || letters.len() == 1 {
        return Some(Piece::Initials {
            letters: folded_letters(),
            dotted,
            vowel: false,
        });
    }
    if !is_last && letters.len() <= 3 && !word.contains('-') && letters.iter().all(|c| c.is_uppercase()) {
        let letters = folded_letters();
        let vowel = letters.chars().any(is_vowel);
        return Some(Piece::Initials {
            letters,
            dotted: false,
            vowel,
        });
    }
    let tokens = normalize(word).tokens;
    if tokens.is_empty() {
        return None;
    }
    let mut chars = word.chars();
    let short_given = letters.len() == 2
        && chars.next().is_some_and(char::is_uppercase)
        && chars.next().is_some_and(char::is_lowercase);
    Some(Piece::Word { tokens, short_given })
}

fn assemble(front: &[Piece], surname: Vec<String>, template: TemplateId) -> ParsedName {
    let mut given = Vec::new();
    for p in front {
        if let Piece::Word { tokens, .. } = p {
            given.extend(tokens.iter().cloned());
        }
    }
    let initials = if front.iter().any(|p| matches!(p, Piece::Initials { .. })) {
        front.iter().map(Piece::initial_letters).collect()
    } else {
        String::new()
    };
    ParsedName::new(given, initials, surname, template)
}

fn word_tokens(p: &Piece) -> Option<&Vec<String>> {
    match p {
        Piece::Word { tokens, .. } => Some(tokens),
        Piece::Initials { .. } => None,
    }
}

fn display_templates(pieces: &[Piece], comma_inverted: bool) -> Vec<ParsedName> {
    use Piece::*;
    use TemplateId as T;
    let n = pieces.len();
    if n == 0 {
        return Vec::new();
    }
    if comma_inverted && n >= 2 {
        if let Some(surname) = word_tokens(&pieces[0]) {
            return vec![assemble(&pieces[1..], surname.clone(), T::SurnameCommaGiven)];
        }
    }
    let mut out = Vec::new();
    match pieces {
        [Word { tokens, .. }] => {
            out.push(ParsedName::new(Vec::new(), String::new(), tokens.clone(), T::SingleToken));
        }
        [Initials { letters, dotted, vowel }, Word { tokens, .. }] => {
            let t = if *dotted {
                T::DottedInitialsSurname
            } else {
                T::CapitalInitialsSurname
            };
            out.push(ParsedName::new(Vec::new(), letters.clone(), tokens.clone(), t));
            if *vowel {
                out.push(ParsedName::new(vec![letters.clone()], String::new(), tokens.clone(), T::GivenSurname));
            }
        }
        [Word { tokens: a, short_given }, Word { tokens: b, .. }] => {
            if b.len() >= 2 {
                out.push(ParsedName::new(a.clone(), String::new(), b.clone(), T::GivenHyphenatedSurname));
            } else {
                let t = if *short_given {
                    T::ShortGivenSurname
                } else {
                    T::GivenSurname
                };
                out.push(ParsedName::new(a.clone(), String::new(), b.clone(), t));
                out.push(ParsedName::new(b.clone(), String::new(), a.clone(), T::InvertedGivenSurname));
            }
        }
        [Word { tokens: a, .. }, Initials { letters, .. }] => {
            out.push(ParsedName::new(Vec::new(), letters.clone(), a.clone(), T::SurnameInitials));
        }
        [first @ Word { .. }, mid @ Initials { .. }, Word { tokens: last, .. }] => {
            out.push(assemble(&[first.clone(), mid.clone()], last.clone(), T::GivenInitialSurname));
        }
        _ => match &pieces[n - 1] {
            Word { tokens: last, .. } => {
                out.push(assemble(&pieces[..n - 1], last.clone(), T::FallbackLastSurname));
                if n >= 3 && pieces.iter().all(|p| matches!(p, Word { .. })) {
                    let surname: Vec<String> =
                        pieces[1..].iter().filter_map(word_tokens).flatten().cloned().collect();
                    out.push(assemble(&pieces[..1], surname, T::FallbackDoubleSurname));
                }
            }
            Initials { .. } => {
                let surname: Vec<String> = pieces.iter().filter_map(word_tokens).flatten().cloned().collect();
                let letters: String = pieces
                    .iter()
                    .filter(|p| matches!(p, Initials { .. }))
                    .map(Piece::initial_letters)
                    .collect();
                if !surname.is_empty() {
                    out.push(ParsedName::new(Vec::new(), letters, surname, T::SurnameInitials));
                }
            }
        },
    }
    out
}

fn dedup_readings(parsed: Vec<ParsedName>) -> Vec<ParsedName> {
    let mut out: Vec<ParsedName> = Vec::with_capacity(parsed.len());
    for p in parsed {
        if !p.surname_tokens.is_empty() && !out.iter().any(|q| q.same_reading(&p)) {
            out.push(p);
        }
    }
    out
}

/// Segments a free-text display name into hypotheses, most specific
/// template first. A name of exactly the platform limit is flagged as
/// possibly truncated, which allows prefix matching on its last token.
pub fn parse_display_name(display: &str) -> Vec<ParsedName> {
    let truncated = display.chars().count() >= MAX_DISPLAY_NAME_LEN;
    let (words, comma_inverted) = display_words(display);
    let words = strip_raw_titles(words);
    let pieces: Vec<Piece> = words
        .iter()
        .enumerate()
        .filter_map(|(i, w)| classify(w, i + 1 == words.len()))
        .collect();
    let mut out = dedup_readings(display_templates(&pieces, comma_inverted));
    for p in &mut out {
        p.truncated = truncated;
    }
    out
}

fn camel_split(part: &str) -> Vec<String> {
    let chars: Vec<char> = part.chars().collect();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..chars.len() {
        let boundary = (chars[i - 1].is_lowercase() && chars[i].is_uppercase())
            || (chars[i - 1].is_uppercase()
                && chars[i].is_uppercase()
                && chars.get(i + 1).is_some_and(|c| c.is_lowercase()));
        if boundary {
            out.push(chars[start..i].iter().collect());
            start = i;
        }
    }
    out.push(chars[start..].iter().collect());
    out
}

struct Segment {
    key: String,
    initial_like: bool,
}

impl Segment {
    fn new(raw: &str) -> Self {
        let key = fold(raw);
        let len = key.chars().count();
        let initial_like = len == 1
            || (len <= 3 && raw.chars().all(char::is_uppercase))
            || (len <= 3 && !key.chars().any(is_vowel));
        Segment { key, initial_like }
    }

    fn piece(&self) -> Piece {
        if self.initial_like {
            Piece::Initials {
                letters: self.key.clone(),
                dotted: false,
                vowel: false,
            }
        } else {
            Piece::Word {
                tokens: vec![self.key.clone()],
                short_given: false,
            }
        }
    }
}

fn single_segment(seg: &Segment) -> Vec<ParsedName> {
    use TemplateId as T;
    let chars: Vec<char> = seg.key.chars().collect();
    let len = chars.len();
    let mut out = Vec::new();
    if len < 2 {
        return out;
    }
    for k in 1..len.saturating_sub(1) {
        let prefix: String = chars[..k].iter().collect();
        let suffix: String = chars[k..].iter().collect();
        if is_title_token(&prefix) {
            continue;
        }
        if k <= 2 {
            out.push(ParsedName::new(Vec::new(), prefix.clone(), vec![suffix.clone()], T::HandleInitialPrefix));
        }
        if k >= 2 {
            out.push(ParsedName::new(vec![prefix], String::new(), vec![suffix], T::HandleGivenPrefix));
        }
    }
    if len >= 3 {
        let surname: String = chars[..len - 1].iter().collect();
        out.push(ParsedName::new(
            Vec::new(),
            chars[len - 1].to_string(),
            vec![surname],
            T::HandleInitialSuffix,
        ));
    }
    out.push(ParsedName::new(Vec::new(), String::new(), vec![seg.key.clone()], T::HandleSurnameOnly));
    out
}

/// Segments a handle using underscores, digits and case changes as dividers.
/// A handle with no divider yields every initial/given-name + surname split
/// plus a surname-only reading of the whole handle.
pub fn parse_handle(handle: &str) -> Vec<ParsedName> {
    use TemplateId as T;
    let parts: Vec<&str> = handle
        .split(|c: char| !c.is_alphabetic())
        .filter(|p| !p.is_empty())
        .collect();
    let underscored = parts.len() > 1;
    let mut raw: Vec<String> = parts.iter().flat_map(|p| camel_split(p)).collect();
    while raw.len() > 1 && is_title_token(&raw[0].to_lowercase()) {
        raw.remove(0);
    }
    while raw.len() > 1 && is_title_token(&raw[raw.len() - 1].to_lowercase()) {
        raw.pop();
    }
    let segs: Vec<Segment> = raw.iter().map(|r| Segment::new(r)).collect();
    let out = match segs.len() {
        0 => Vec::new(),
        1 => single_segment(&segs[0]),
        n => {
            let template = if underscored {
                T::HandleUnderscore
            } else {
                T::HandleCamelCase
            };
            let pieces: Vec<Piece> = segs.iter().map(Segment::piece).collect();
            let mut out = Vec::new();
            for j in (1..n).rev() {
                if segs[j..].iter().any(|s| s.key.chars().count() < 2) {
                    continue;
                }
                let surname = segs[j..].iter().map(|s| s.key.clone()).collect();
                out.push(assemble(&pieces[..j], surname, template));
            }
            if segs[0].key.chars().count() >= 2 && !segs[0].initial_like {
                out.push(assemble(&pieces[1..], vec![segs[0].key.clone()], T::HandleInverted));
            }
            out
        }
    };
    dedup_readings(out)
}

/// Name-level agreement between an author and one parsed hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct MatchEvidence {
    pub surname_match: bool,
    pub initial_match: bool,
    pub full_name_match: bool,
    pub first_name_match: bool,
    /// Only the first token of a multi-token first name matched.
    pub first_single_match: bool,
    /// The author publishes with a first name that the account never shows.
    pub author_first_absent: bool,
}

impl MatchEvidence {
    /// Surname plus first initial: the minimum for a candidate pair.
    pub fn satisfies_rule0(&self) -> bool {
        self.surname_match && self.initial_match
    }
}

/// Precomputed match keys for one author.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorNameKeys {
    pub surname_key: String,
    pub surname_variants: BTreeSet<String>,
    pub first_keys: Vec<String>,
    pub initials: String,
    pub first_initial: Option<char>,
}

impl AuthorNameKeys {
    pub fn new(author: &AuthorRecord) -> Self {
        let first_keys = author
            .first_name
            .as_deref()
            .map(|f| normalize(f).match_keys())
            .unwrap_or_default();
        let initials: String = fold(&author.initials).chars().filter(|c| c.is_alphabetic()).collect();
        let first_initial = initials
            .chars()
            .next()
            .or_else(|| first_keys.first().and_then(|k| k.chars().next()));
        AuthorNameKeys {
            surname_key: normalize(&author.surname).match_keys().concat(),
            surname_variants: surname_variants(&author.surname),
            first_keys,
            initials,
            first_initial,
        }
    }

    pub fn compare(&self, parsed: &ParsedName) -> MatchEvidence {
        let surname_key = parsed.surname_key();
        let surname_match = !surname_key.is_empty()
            && (surname_key == self.surname_key
                || (parsed.truncated
                    && surname_key.chars().count() >= 2
                    && self.surname_key.starts_with(&surname_key)));
        let initial_match = matches!(
            (parsed.first_initial(), self.first_initial),
            (Some(p), Some(a)) if p == a
        );

        let given: Vec<String> = parsed.given_tokens.iter().map(|t| match_key(t)).collect();
        let first = &self.first_keys;
        let concat_equal = !given.is_empty() && given.concat() == first.concat();
        let first_name_match =
            !first.is_empty() && !given.is_empty() && (first.iter().all(|k| given.contains(k)) || concat_equal);
        let full_name_match = surname_match
            && if first.is_empty() {
                given.is_empty() && !parsed.initials.is_empty() && parsed.initials == self.initials
            } else {
                first_name_match
                    && (concat_equal
                        || given.iter().collect::<BTreeSet<_>>() == first.iter().collect::<BTreeSet<_>>())
            };
        let first_single_match = first.len() >= 2 && !first_name_match && given.contains(&first[0]);
        let mentioned = given
            .iter()
            .cloned()
            .chain(parsed.surname_tokens.iter().map(|t| match_key(t)))
            .any(|k| first.contains(&k));
        let author_first_absent = !first.is_empty() && !first_name_match && !first_single_match && !mentioned;

        MatchEvidence {
            surname_match,
            initial_match,
            full_name_match,
            first_name_match,
            first_single_match,
            author_first_absent,
        }
    }
}

pub fn name_compatible(author: &AuthorRecord, parsed: &ParsedName) -> MatchEvidence {
    AuthorNameKeys::new(author).compare(parsed)
}
