//! Transaction data model, basket/matrix ingestion and exact support counting.
//!
//! Items are interned to dense `u32` ids in first-seen order. Every support
//! query counts transactions as an integer and divides by `n` once.

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::SupportTriple;

/// Marker line used for a transaction that holds no items.
pub const EMPTY_TRANSACTION: &str = "{}";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ItemCatalog {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl ItemCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a catalog from distinct labels, keeping their order.
    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut catalog = Self::new();
        for label in labels {
            let label = label.as_ref().trim();
            if label.is_empty() {
                return Err(Error::InvalidValue("empty item label".into()));
            }
            if catalog.index.contains_key(label) {
                return Err(Error::InvalidValue(format!(
                    "duplicate item label {label:?}"
                )));
            }
            catalog.intern(label)?;
        }
        Ok(catalog)
    }

    /// Returns the id for `label`, assigning the next free id if it is new.
    pub fn intern(&mut self, label: &str) -> Result<u32> {
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::InvalidValue("empty item label".into()));
        }
        if let Some(&id) = self.index.get(label) {
            return Ok(id);
        }
        let id = u32::try_from(self.names.len())
            .map_err(|_| Error::InvalidValue("item catalog exceeds u32 ids".into()))?;
        self.names.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        Ok(id)
    }

    pub fn id(&self, label: &str) -> Option<u32> {
        self.index.get(label.trim()).copied()
    }

    pub fn label(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Renders an itemset as `{a,b,c}` using catalog labels.
    pub fn format_itemset(&self, itemset: &Itemset) -> String {
        let labels: Vec<&str> = itemset
            .items()
            .iter()
            .map(|&id| self.label(id).unwrap_or("?"))
            .collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// Strictly ascending item ids present in one transaction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Transaction {
    items: Vec<u32>,
}

impl Transaction {
    pub fn new(mut items: Vec<u32>) -> Self {
        items.sort_unstable();
        items.dedup();
        Self { items }
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every id of the sorted `subset` occurs in this transaction.
    pub fn contains_all(&self, subset: &[u32]) -> bool {
        is_sorted_subset(subset, &self.items)
    }
}

/// Non-empty, strictly ascending set of item ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Itemset {
    items: Vec<u32>,
}

impl Itemset {
    pub fn new(mut items: Vec<u32>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::EmptyItemset);
        }
        items.sort_unstable();
        items.dedup();
        Ok(Self { items })
    }

    pub fn single(item: u32) -> Self {
        Self { items: vec![item] }
    }

    /// Caller guarantees `items` is non-empty and strictly ascending.
    pub(crate) fn from_sorted(items: Vec<u32>) -> Self {
        debug_assert!(!items.is_empty());
        debug_assert!(items.windows(2).all(|w| w[0] < w[1]));
        Self { items }
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_disjoint(&self, other: &Itemset) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            match self.items[i].cmp(&other.items[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut items = Vec::with_capacity(self.len() + other.len());
        items.extend_from_slice(&self.items);
        items.extend_from_slice(&other.items);
        items.sort_unstable();
        items.dedup();
        Itemset { items }
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        is_sorted_subset(&self.items, &other.items)
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.items.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", ids.join(","))
    }
}

fn is_sorted_subset(needle: &[u32], haystack: &[u32]) -> bool {
    if needle.len() > haystack.len() {
        return false;
    }
    let mut rest = haystack;
    for &id in needle {
        match rest.binary_search(&id) {
            Ok(pos) => rest = &rest[pos + 1..],
            Err(_) => return false,
        }
    }
    true
}

/// Immutable transaction database. `n >= 1` always holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransactionSet {
    catalog: ItemCatalog,
    transactions: Vec<Transaction>,
}

impl TransactionSet {
    pub fn new(catalog: ItemCatalog, transactions: Vec<Transaction>) -> Result<Self> {
        if transactions.is_empty() {
            return Err(Error::EmptyTransactionSet);
        }
        let k = catalog.len();
        for t in &transactions {
            if let Some(&bad) = t.items().iter().find(|&&id| id as usize >= k) {
                return Err(Error::UnknownItem(bad));
            }
        }
        Ok(Self {
            catalog,
            transactions,
        })
    }

    pub fn catalog(&self) -> &ItemCatalog {
        &self.catalog
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn n(&self) -> usize {
        self.transactions.len()
    }

    fn check_ids(&self, items: &[u32]) -> Result<()> {
        match items.iter().find(|&&id| id as usize >= self.catalog.len()) {
            Some(&bad) => Err(Error::UnknownItem(bad)),
            None => Ok(()),
        }
    }

    /// Number of transactions containing every item of `x`.
    pub fn count(&self, x: &Itemset) -> Result<usize> {
        self.check_ids(x.items())?;
        Ok(self
            .transactions
            .par_iter()
            .filter(|t| t.contains_all(x.items()))
            .count())
    }

    pub fn support(&self, x: &Itemset) -> Result<f64> {
        Ok(self.count(x)? as f64 / self.n() as f64)
    }

    pub fn rule_counts(&self, antecedent: &Itemset, consequent: &Itemset) -> Result<RuleCounts> {
        if !antecedent.is_disjoint(consequent) {
            return Err(Error::OverlappingRule);
        }
        Ok(RuleCounts {
            a: self.count(antecedent)?,
            b: self.count(consequent)?,
            ab: self.count(&antecedent.union(consequent))?,
            n: self.n(),
        })
    }

    pub fn rule_supports(
        &self,
        antecedent: &Itemset,
        consequent: &Itemset,
    ) -> Result<RuleSupports> {
        let c = self.rule_counts(antecedent, consequent)?;
        Ok(RuleSupports {
            p_a: c.p_a(),
            p_b: c.p_b(),
            p_ab: c.p_ab(),
            n: c.n,
        })
    }

    /// Appends `extra` empty transactions.
    pub fn with_empty_transactions(&self, extra: usize) -> Self {
        let mut transactions = self.transactions.clone();
        transactions.extend(std::iter::repeat_with(Transaction::default).take(extra));
        Self {
            catalog: self.catalog.clone(),
            transactions,
        }
    }

    /// Writes the set in basket format, one line per transaction.
    pub fn write_basket<W: Write>(&self, mut out: W) -> Result<()> {
        for t in &self.transactions {
            if t.is_empty() {
                writeln!(out, "{EMPTY_TRANSACTION}")?;
                continue;
            }
            let mut first = true;
            for &id in t.items() {
                if !first {
                    out.write_all(b" ")?;
                }
                first = false;
                out.write_all(self.catalog.names[id as usize].as_bytes())?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// Integer occurrence counts behind a rule's support triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleCounts {
    pub a: usize,
    pub b: usize,
    pub ab: usize,
    pub n: usize,
}

impl RuleCounts {
    pub fn p_a(&self) -> f64 {
        self.a as f64 / self.n as f64
    }

    pub fn p_b(&self) -> f64 {
        self.b as f64 / self.n as f64
    }

    pub fn p_ab(&self) -> f64 {
        self.ab as f64 / self.n as f64
    }

    pub fn triple(&self) -> Result<SupportTriple> {
        SupportTriple::new(self.p_a(), self.p_b(), self.p_ab())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RuleSupports {
    pub p_a: f64,
    pub p_b: f64,
    pub p_ab: f64,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Delimiter {
    #[default]
    Whitespace,
    Char(char),
}

impl std::str::FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "whitespace" | "ws" => Ok(Delimiter::Whitespace),
            "tab" | "\\t" => Ok(Delimiter::Char('\t')),
            _ => {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => Ok(Delimiter::Char(c)),
                    _ => Err(Error::InvalidValue(format!(
                        "delimiter must be a single character or \"whitespace\", got {s:?}"
                    ))),
                }
            }
        }
    }
}

/// Parses basket text: one transaction per line, items separated by
/// `delimiter`. Blank lines and lines starting with `#` are skipped; a line
/// holding only `{}` is an empty transaction.
pub fn parse_basket<R: BufRead>(reader: R, delimiter: Delimiter) -> Result<TransactionSet> {
    let mut catalog = ItemCatalog::new();
    let mut transactions = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed == EMPTY_TRANSACTION {
            transactions.push(Transaction::default());
            continue;
        }
        let tokens: Box<dyn Iterator<Item = &str>> = match delimiter {
            Delimiter::Whitespace => Box::new(trimmed.split_whitespace()),
            Delimiter::Char(c) => Box::new(trimmed.split(c)),
        };
        let mut ids = Vec::new();
        for token in tokens {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            ids.push(catalog.intern(token).map_err(|e| Error::Parse {
                line: lineno + 1,
                message: e.to_string(),
            })?);
        }
        transactions.push(Transaction::new(ids));
    }
    TransactionSet::new(catalog, transactions)
}

/// Parses a dense 0/1 CSV matrix: the header row names the items, each
/// further row is one transaction.
pub fn parse_dense_csv<R: Read>(reader: R) -> Result<TransactionSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let catalog = ItemCatalog::from_labels(rdr.headers()?.iter())?;
    let k = catalog.len();
    let mut transactions = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map_or(row + 2, |p| p.line() as usize);
        if record.len() != k {
            return Err(Error::Parse {
                line,
                message: format!("expected {k} columns, found {}", record.len()),
            });
        }
        let mut ids = Vec::new();
        for (col, cell) in record.iter().enumerate() {
            match cell {
                "1" => ids.push(col as u32),
                "0" => {}
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected 0 or 1, found {other:?}"),
                    })
                }
            }
        }
        transactions.push(Transaction::new(ids));
    }
    TransactionSet::new(catalog, transactions)
}
