//! The relational data model: a table of named attributes over indexed tuples.
//!
//! Values are opaque byte strings. Each cell is also interned into a per-column
//! `u32` code so that partition and product computations can work on integers;
//! two cells of the same column carry the same code exactly when they are equal
//! under the relation's value semantics.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Options controlling how rows are read and how values compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    /// Drop exact duplicate rows, keeping the first occurrence.
    pub dedupe_rows: bool,
    /// Treat every empty cell as a fresh value unequal to any other cell.
    pub null_distinct: bool,
    pub delimiter: u8,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            dedupe_rows: false,
            null_distinct: false,
            delimiter: b',',
        }
    }
}

/// A set of attribute indices, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrSet(Vec<usize>);

impl AttrSet {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        AttrSet(v)
    }

    pub fn empty() -> Self {
        AttrSet(Vec::new())
    }

    pub fn single(a: usize) -> Self {
        AttrSet(vec![a])
    }

    /// All attributes `0..n`.
    pub fn full(n: usize) -> Self {
        AttrSet((0..n).collect())
    }

    /// Builds the set of attributes whose bit is set in `mask`.
    pub fn from_mask(mask: u64) -> Self {
        AttrSet((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn to_mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &a| m | 1 << a)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn union(&self, other: &AttrSet) -> AttrSet {
        AttrSet::new(self.iter().chain(other.iter()))
    }

    pub fn difference(&self, other: &AttrSet) -> AttrSet {
        AttrSet(self.iter().filter(|&a| !other.contains(a)).collect())
    }

    pub fn is_subset(&self, other: &AttrSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn without(&self, a: usize) -> AttrSet {
        AttrSet(self.iter().filter(|&b| b != a).collect())
    }

    /// Largest index plus one, or zero for the empty set.
    pub(crate) fn bound(&self) -> usize {
        self.0.last().map_or(0, |&a| a + 1)
    }
}

impl FromIterator<usize> for AttrSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        AttrSet::new(iter)
    }
}

impl fmt::Display for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// A raw view of one cell used by code paths that must not rely on interning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKey<'a> {
    Text(&'a str),
    /// An empty cell under null-distinct semantics, tagged by its row so it
    /// equals nothing else.
    Null(usize),
}

/// The database `(T, A)`: named attributes over an ordered list of tuples.
#[derive(Debug, Clone)]
pub struct Relation {
    attributes: Vec<String>,
    rows: Vec<Vec<String>>,
    /// Column-major interned values.
    codes: Vec<Vec<u32>>,
    provenance: String,
    null_distinct: bool,
}

impl Relation {
    /// Builds an in-memory relation. Every row must have one value per attribute.
    pub fn new<S: Into<String>>(
        attributes: impl IntoIterator<Item = S>,
        rows: Vec<Vec<String>>,
        opts: IngestOptions,
    ) -> Result<Self> {
        Self::build(
            attributes.into_iter().map(Into::into).collect(),
            rows,
            "inline".to_string(),
            opts,
        )
    }

    /// Shorthand for tests and examples: rows given as string slices.
    pub fn from_str_rows(attributes: &[&str], rows: &[&[&str]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| s.to_string()).collect())
            .collect();
        Relation::new(attributes.iter().copied(), rows, IngestOptions::default())
    }

    fn build(
        attributes: Vec<String>,
        mut rows: Vec<Vec<String>>,
        provenance: String,
        opts: IngestOptions,
    ) -> Result<Self> {
        let ingest_err = |message: String| Error::Ingestion {
            source_name: provenance.clone(),
            message,
        };
        let mut seen = HashSet::new();
        for name in &attributes {
            if !seen.insert(name.as_str()) {
                return Err(ingest_err(format!("duplicate attribute \"{name}\"")));
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != attributes.len() {
                return Err(ingest_err(format!(
                    "row {} has {} values, expected {}",
                    i + 1,
                    row.len(),
                    attributes.len()
                )));
            }
        }
        if opts.dedupe_rows {
            let mut seen = HashSet::new();
            rows.retain(|r| seen.insert(r.clone()));
        }

        let mut codes = Vec::with_capacity(attributes.len());
        for a in 0..attributes.len() {
            let mut dict: HashMap<&str, u32> = HashMap::new();
            let mut next = 0u32;
            let mut col = Vec::with_capacity(rows.len());
            for row in &rows {
                let cell = row[a].as_str();
                let code = if opts.null_distinct && cell.is_empty() {
                    next += 1;
                    next - 1
                } else {
                    *dict.entry(cell).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                };
                col.push(code);
            }
            codes.push(col);
        }

        Ok(Relation {
            attributes,
            rows,
            codes,
            provenance,
            null_distinct: opts.null_distinct,
        })
    }

    /// Reads a CSV file whose first record is the header.
    pub fn load_csv(path: impl AsRef<Path>, opts: IngestOptions) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file, &path.display().to_string(), opts)
    }

    pub fn from_reader(reader: impl Read, source_name: &str, opts: IngestOptions) -> Result<Self> {
        let ingest_err = |message: String| Error::Ingestion {
            source_name: source_name.to_string(),
            message,
        };
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .delimiter(opts.delimiter)
            .from_reader(reader);
        let mut records = rdr.byte_records();

        let header = match records.next() {
            None => return Err(ingest_err("empty file: a header row is required".into())),
            Some(rec) => rec.map_err(|e| ingest_err(e.to_string()))?,
        };
        let attributes = decode_record(&header).map_err(|m| ingest_err(format!("header: {m}")))?;

        let mut rows = Vec::new();
        for rec in records {
            let rec = rec.map_err(|e| ingest_err(e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line());
            let row = decode_record(&rec).map_err(|m| ingest_err(format!("line {line}: {m}")))?;
            if row.len() != attributes.len() {
                return Err(ingest_err(format!(
                    "ragged row at line {line}: {} values, expected {}",
                    row.len(),
                    attributes.len()
                )));
            }
            rows.push(row);
        }
        Self::build(attributes, rows, source_name.to_string(), opts)
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_attrs(&self) -> usize {
        self.attributes.len()
    }

    pub fn n_tuples(&self) -> usize {
        self.rows.len()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn null_distinct(&self) -> bool {
        self.null_distinct
    }

    pub fn attr_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    /// Raw text of a cell.
    pub fn value(&self, row: usize, attr: usize) -> &str {
        &self.rows[row][attr]
    }

    pub fn row(&self, row: usize) -> &[String] {
        &self.rows[row]
    }

    /// Interned value codes of one column, indexed by tuple.
    pub fn column(&self, attr: usize) -> &[u32] {
        &self.codes[attr]
    }

    pub fn code(&self, row: usize, attr: usize) -> u32 {
        self.codes[attr][row]
    }

    /// The cell as seen by the value semantics, without going through the
    /// interned codes.
    pub fn cell_key(&self, row: usize, attr: usize) -> CellKey<'_> {
        let v = self.rows[row][attr].as_str();
        if self.null_distinct && v.is_empty() {
            CellKey::Null(row)
        } else {
            CellKey::Text(v)
        }
    }

    /// Validates attribute indices and packs them into an [`AttrSet`].
    pub fn attr_set(&self, indices: &[usize]) -> Result<AttrSet> {
        if let Some(&bad) = indices.iter().find(|&&a| a >= self.n_attrs()) {
            return Err(Error::contract(format!(
                "attribute index {bad} out of range for {} attributes",
                self.n_attrs()
            )));
        }
        Ok(AttrSet::new(indices.iter().copied()))
    }

    /// Resolves attribute names (case-sensitive).
    pub fn attr_set_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<AttrSet> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let n = n.as_ref();
            match self.attr_index(n) {
                Some(i) => out.push(i),
                None => return Err(Error::contract(format!("unknown attribute \"{n}\""))),
            }
        }
        Ok(AttrSet::new(out))
    }

    pub(crate) fn check_attrs(&self, xs: &AttrSet) -> Result<()> {
        if xs.bound() > self.n_attrs() {
            return Err(Error::contract(format!(
                "attribute set {xs} out of range for {} attributes",
                self.n_attrs()
            )));
        }
        Ok(())
    }

    pub fn names_of(&self, xs: &AttrSet) -> Vec<&str> {
        xs.iter().map(|a| self.attributes[a].as_str()).collect()
    }
}

fn decode_record(rec: &csv::ByteRecord) -> std::result::Result<Vec<String>, String> {
    rec.iter()
        .map(|f| String::from_utf8(f.to_vec()).map_err(|_| "value is not valid UTF-8".to_string()))
        .collect()
}

/// Projection `Π_xs(rel)` with set semantics. Rows are returned as value codes
/// in the order of `xs`.
pub fn project(rel: &Relation, xs: &AttrSet) -> Result<BTreeSet<Vec<u32>>> {
    rel.check_attrs(xs)?;
    Ok((0..rel.n_tuples())
        .map(|t| xs.iter().map(|a| rel.code(t, a)).collect())
        .collect())
}

/// Same projection, rendered back to cell text and sorted.
pub fn project_text(rel: &Relation, xs: &AttrSet) -> Result<Vec<Vec<String>>> {
    rel.check_attrs(xs)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in 0..rel.n_tuples() {
        let key: Vec<u32> = xs.iter().map(|a| rel.code(t, a)).collect();
        if seen.insert(key) {
            out.push(xs.iter().map(|a| rel.value(t, a).to_string()).collect());
        }
    }
    out.sort();
    Ok(out)
}
