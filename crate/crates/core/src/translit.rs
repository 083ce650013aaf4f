//! Rule-table transliteration into Latin script.
//!
//! Tables are loaded from `<script>.rules.tsv` files, one
//! `source<TAB>target[<TAB>priority]` rule per line. Text is scanned left to
//! right; at each position the longest matching source wins, then the highest
//! priority, then the earliest rule in load order. Characters no rule covers
//! fall back to Latin folding (diacritics stripped, case kept) or pass
//! through unchanged.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

pub const RULE_FILE_SUFFIX: &str = ".rules.tsv";

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: no rule files", .0.display())]
    NoRuleFiles(PathBuf),
    #[error("{file}:{line}: {reason}")]
    Malformed {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("duplicate rule ({source_text:?}, priority {priority}) at {first} and {second}")]
    Duplicate {
        source_text: String,
        priority: i32,
        first: String,
        second: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub source: String,
    pub target: String,
    pub priority: i32,
}

#[derive(Debug, Clone)]
struct Compiled {
    source: Vec<char>,
    target: String,
    priority: i32,
    origin: String,
}

/// An immutable set of transliteration rules.
#[derive(Debug, Clone)]
pub struct RuleTable {
    name: String,
    rules: Vec<Compiled>,
    // rule indices keyed by first source char, in match preference order
    by_first: HashMap<char, Vec<usize>>,
}

/// Characters allowed in rule targets.
pub fn is_output_char(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == '\''
}

fn is_combining_diacritic(c: char) -> bool {
    ('\u{0300}'..='\u{036F}').contains(&c)
}

/// Latin letters without a canonical decomposition to an ASCII base.
fn fold_latin(c: char) -> Option<&'static str> {
    Some(match c {
        'ß' => "ss",
        'ẞ' => "SS",
        'æ' => "ae",
        'Æ' => "AE",
        'œ' => "oe",
        'Œ' => "OE",
        'ø' => "o",
        'Ø' => "O",
        'đ' => "d",
        'Đ' => "D",
        'ð' => "d",
        'Ð' => "D",
        'ł' => "l",
        'Ł' => "L",
        'þ' => "th",
        'Þ' => "TH",
        'ħ' => "h",
        'Ħ' => "H",
        'ı' => "i",
        _ => return None,
    })
}

/// ASCII base of a Latin letter or digit with diacritics, if it has one.
fn latin_base(c: char) -> Option<char> {
    let mut parts = c.nfd();
    let base = parts.next()?;
    (base != c && base.is_ascii_alphanumeric() && parts.all(is_combining_diacritic))
        .then_some(base)
}

/// Whether `c` is an ASCII letter or digit or a Latin letter that folds to
/// ASCII.
pub fn is_latin_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || fold_latin(c).is_some() || latin_base(c).is_some()
}

fn is_special_syntax(surface: &str) -> bool {
    surface.len() >= 3
        && surface.starts_with('<')
        && surface.ends_with('>')
        && !surface[1..surface.len() - 1].contains(['<', '>'])
}

impl RuleTable {
    /// Builds a table from rules in preference order. `origin` labels are
    /// only used in error messages.
    fn compile(
        name: String,
        rules: impl IntoIterator<Item = (Rule, String)>,
    ) -> Result<Self, RuleError> {
        let mut compiled: Vec<Compiled> = Vec::new();
        let mut seen: HashMap<(String, i32), usize> = HashMap::new();
        for (rule, origin) in rules {
            let key = (rule.source.clone(), rule.priority);
            if let Some(&first) = seen.get(&key) {
                return Err(RuleError::Duplicate {
                    source_text: rule.source,
                    priority: rule.priority,
                    first: compiled[first].origin.clone(),
                    second: origin,
                });
            }
            seen.insert(key, compiled.len());
            compiled.push(Compiled {
                source: rule.source.chars().collect(),
                target: rule.target,
                priority: rule.priority,
                origin,
            });
        }
        let mut by_first: HashMap<char, Vec<usize>> = HashMap::new();
        for (i, r) in compiled.iter().enumerate() {
            by_first.entry(r.source[0]).or_default().push(i);
        }
        for list in by_first.values_mut() {
            list.sort_by(|&a, &b| {
                let (ra, rb) = (&compiled[a], &compiled[b]);
                rb.source
                    .len()
                    .cmp(&ra.source.len())
                    .then(rb.priority.cmp(&ra.priority))
                    .then(a.cmp(&b))
            });
        }
        Ok(RuleTable {
            name,
            rules: compiled,
            by_first,
        })
    }

    /// Builds a table from in-memory rules, validating them like file rules.
    pub fn from_rules(name: &str, rules: Vec<Rule>) -> Result<Self, RuleError> {
        let labelled = rules
            .into_iter()
            .enumerate()
            .map(|(i, rule)| {
                validate(&rule).map_err(|reason| RuleError::Malformed {
                    file: name.to_string(),
                    line: i + 1,
                    reason,
                })?;
                Ok((rule, format!("{name}:{}", i + 1)))
            })
            .collect::<Result<Vec<_>, RuleError>>()?;
        RuleTable::compile(name.to_string(), labelled)
    }

    /// Parses the text of one rule file.
    pub fn parse(name: &str, text: &str) -> Result<Self, RuleError> {
        let rules = parse_rule_file(name, text)?;
        RuleTable::compile(name.to_string(), rules)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = Rule> + '_ {
        self.rules.iter().map(|r| Rule {
            source: r.source.iter().collect(),
            target: r.target.clone(),
            priority: r.priority,
        })
    }

    /// Longest target length divided by shortest source length, and at least
    /// the expansion of the built-in Latin folds.
    pub fn max_expansion(&self) -> f64 {
        let max_target = self.rules.iter().map(|r| r.target.len()).max().unwrap_or(0);
        let min_source = self.rules.iter().map(|r| r.source.len()).min().unwrap_or(1);
        (max_target as f64 / min_source as f64).max(2.0)
    }

    fn match_at(&self, text: &[char]) -> Option<&Compiled> {
        let candidates = self.by_first.get(text.first()?)?;
        candidates
            .iter()
            .map(|&i| &self.rules[i])
            .find(|r| text.starts_with(&r.source))
    }

    fn single(&self, c: char) -> Option<&Compiled> {
        self.by_first
            .get(&c)?
            .iter()
            .map(|&i| &self.rules[i])
            .find(|r| r.source.len() == 1)
    }

    pub fn transliterate(&self, text: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let mut out = String::with_capacity(text.len());
        let mut i = 0;
        while i < chars.len() {
            if let Some(rule) = self.match_at(&chars[i..]) {
                out.push_str(&rule.target);
                i += rule.source.len();
                continue;
            }
            let c = chars[i];
            i += 1;
            if c.is_ascii() {
                out.push(c);
            } else if is_combining_diacritic(c) {
                // a stray mark is stripped only when it decorates Latin output
                if !out.ends_with(|p: char| p.is_ascii_alphanumeric()) {
                    out.push(c);
                }
            } else if let Some(folded) = fold_latin(c) {
                out.push_str(folded);
            } else if let Some(base) = latin_base(c) {
                out.push(base);
            } else if let Some(rule) = c.nfd().next().filter(|&b| b != c).and_then(|b| self.single(b)) {
                // accented letter of a covered script, e.g. Greek tonos
                out.push_str(&rule.target);
            } else {
                out.push(c);
            }
        }
        out
    }

    /// Transliterates a vocabulary surface, keeping a leading `marker`.
    /// Marker-only surfaces and special tokens such as `<s>` are returned
    /// unchanged.
    pub fn transliterate_token(&self, surface: &str, marker: char) -> String {
        if surface.chars().all(|c| c == marker) || is_special_syntax(surface) {
            return surface.to_string();
        }
        match surface.strip_prefix(marker) {
            Some(rest) => {
                let mut out = String::with_capacity(surface.len());
                out.push(marker);
                out.push_str(&self.transliterate(rest));
                out
            }
            None => self.transliterate(surface),
        }
    }
}

fn validate(rule: &Rule) -> Result<(), String> {
    if rule.source.is_empty() {
        return Err("empty source".into());
    }
    if rule.source.chars().any(|c| c.is_ascii()) {
        return Err(format!("source {:?} contains ASCII characters", rule.source));
    }
    if let Some(bad) = rule.target.chars().find(|&c| !is_output_char(c)) {
        return Err(format!(
            "target {:?} contains {bad:?} outside the Latin output alphabet",
            rule.target
        ));
    }
    Ok(())
}

fn parse_rule_file(file: &str, text: &str) -> Result<Vec<(Rule, String)>, RuleError> {
    let mut rules = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.strip_suffix('\r').unwrap_or(raw);
        if content.trim().is_empty() || content.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| RuleError::Malformed {
            file: file.to_string(),
            line,
            reason,
        };
        let fields: Vec<&str> = content.split('\t').collect();
        let (source, target, priority) = match fields.as_slice() {
            [s, t] => (*s, *t, 0),
            [s, t, p] => {
                let p = p
                    .trim()
                    .parse::<i32>()
                    .map_err(|_| malformed(format!("invalid priority {p:?}")))?;
                (*s, *t, p)
            }
            _ => {
                return Err(malformed(format!(
                    "expected 2 or 3 tab-separated fields, found {}",
                    fields.len()
                )))
            }
        };
        let rule = Rule {
            source: source.to_string(),
            target: target.to_string(),
            priority,
        };
        validate(&rule).map_err(malformed)?;
        rules.push((rule, format!("{file}:{line}")));
    }
    Ok(rules)
}

/// Loads and unions every `*.rules.tsv` file in `dir`, in file-name order.
pub fn load_rules(dir: impl AsRef<Path>) -> Result<RuleTable, RuleError> {
    let dir = dir.as_ref();
    let io = |path: &Path, source| RuleError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| io(dir, e))? {
        let path = entry.map_err(|e| io(dir, e))?.path();
        let is_rule_file = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.ends_with(RULE_FILE_SUFFIX));
        if is_rule_file && path.is_file() {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(RuleError::NoRuleFiles(dir.to_path_buf()));
    }
    files.sort();

    let mut names = Vec::new();
    let mut rules = Vec::new();
    for path in &files {
        let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
        let file_name = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default();
        names.push(file_name.trim_end_matches(RULE_FILE_SUFFIX).to_string());
        rules.extend(parse_rule_file(file_name, &text)?);
    }
    RuleTable::compile(names.join("+"), rules)
}
