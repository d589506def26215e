//! Categorical datasets and contingency tables.
//!
//! CSV input is deliberately minimal: comma separated, UTF-8, optional header
//! row, no quoting or escaping, so cells may not contain commas. Lines whose
//! first character is `#` are comments. Empty cells are rejected because the
//! learner assumes complete data.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{arg, Error, Result};

/// Dense cell counts above this size switch to hashed strata.
const DENSE_LIMIT: u64 = 1 << 22;

/// An N x V table of category codes.
///
/// Codes in column `v` lie in `0..cardinalities[v]`. Each code maps back to a
/// label so data can be written out exactly as it was read.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalDataset {
    names: Vec<String>,
    cardinalities: Vec<usize>,
    columns: Vec<Vec<u32>>,
    labels: Vec<Vec<String>>,
    n_rows: usize,
}

impl CategoricalDataset {
    /// Builds a dataset from column-major codes. Labels default to the
    /// decimal code.
    pub fn new(names: Vec<String>, cardinalities: Vec<usize>, columns: Vec<Vec<u32>>) -> Result<Self> {
        let labels = cardinalities.iter().map(|&k| (0..k).map(|c| c.to_string()).collect()).collect();
        Self::with_labels(names, cardinalities, columns, labels)
    }

    pub fn with_labels(names: Vec<String>, cardinalities: Vec<usize>, columns: Vec<Vec<u32>>, labels: Vec<Vec<String>>) -> Result<Self> {
        if names.len() != cardinalities.len() || names.len() != columns.len() || names.len() != labels.len() {
            return arg("names, cardinalities, columns and labels must have equal length");
        }
        if names.is_empty() {
            return arg("dataset needs at least one variable");
        }
        let mut seen = std::collections::HashSet::new();
        for name in &names {
            if name.is_empty() {
                return arg("variable names must be non-empty");
            }
            if !seen.insert(name.as_str()) {
                return arg(format!("duplicate variable name `{name}`"));
            }
        }
        let n_rows = columns[0].len();
        if n_rows == 0 {
            return arg("dataset needs at least one row");
        }
        for (v, col) in columns.iter().enumerate() {
            let k = cardinalities[v];
            if k == 0 {
                return arg(format!("variable `{}` has zero cardinality", names[v]));
            }
            if labels[v].len() != k {
                return arg(format!("variable `{}` has {} labels for {} states", names[v], labels[v].len(), k));
            }
            if col.len() != n_rows {
                return arg(format!("column `{}` has {} rows, expected {}", names[v], col.len(), n_rows));
            }
            if let Some(&bad) = col.iter().find(|&&c| c as usize >= k) {
                return arg(format!("code {bad} out of range for `{}` with {k} states", names[v]));
            }
        }
        Ok(Self { names, cardinalities, columns, labels, n_rows })
    }

    /// Builds a dataset from row-major codes with generated names `X0, X1, ...`
    /// and cardinalities equal to `max code + 1`.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return arg("dataset needs at least one row");
        };
        let v = first.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); v];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != v {
                return arg(format!("row {i} has {} values, expected {v}", row.len()));
            }
            for (col, &c) in columns.iter_mut().zip(row) {
                col.push(c);
            }
        }
        let cards = columns.iter().map(|c| c.iter().max().map_or(1, |&m| m as usize + 1)).collect();
        let names = (0..v).map(|i| format!("X{i}")).collect();
        Self::new(names, cards, columns)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn cardinality(&self, var: usize) -> usize {
        self.cardinalities[var]
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, var: usize) -> &[u32] {
        &self.columns[var]
    }

    pub fn labels(&self, var: usize) -> &[String] {
        &self.labels[var]
    }

    pub fn label(&self, var: usize, code: u32) -> &str {
        &self.labels[var][code as usize]
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Mixed-radix index of every row's configuration over `vars`, first
    /// variable most significant. Returns the per-row indices and the
    /// number of configurations.
    pub(crate) fn config_indices(&self, vars: &[usize]) -> Result<(Vec<u64>, u64)> {
        let mut idx = vec![0u64; self.n_rows];
        let mut q: u64 = 1;
        for &v in vars {
            let k = self.cardinalities[v] as u64;
            q = q.checked_mul(k).ok_or_else(|| Error::Argument("configuration space overflows 64 bits".into()))?;
            for (slot, &c) in idx.iter_mut().zip(&self.columns[v]) {
                *slot = *slot * k + c as u64;
            }
        }
        Ok((idx, q))
    }

    /// Counts of `target` states grouped by configuration of `given`.
    /// Only configurations that occur in the data are returned, in
    /// ascending configuration order.
    pub(crate) fn grouped_counts(&self, target: usize, given: &[usize]) -> Result<Vec<(u64, Vec<u64>)>> {
        let (idx, q) = self.config_indices(given)?;
        let r = self.cardinalities[target];
        Ok(group(&idx, q, r, self.column(target).iter().map(|&c| c as usize)))
    }
}

fn group(strata: &[u64], q: u64, cells: usize, cell_of: impl Iterator<Item = usize>) -> Vec<(u64, Vec<u64>)> {
    let dense = q.checked_mul(cells as u64).is_some_and(|t| t <= DENSE_LIMIT);
    if dense {
        let mut counts = vec![0u64; q as usize * cells];
        for (&s, cell) in strata.iter().zip(cell_of) {
            counts[s as usize * cells + cell] += 1;
        }
        counts.chunks(cells).enumerate().filter(|(_, c)| c.iter().any(|&x| x > 0)).map(|(s, c)| (s as u64, c.to_vec())).collect()
    } else {
        let mut map: HashMap<u64, Vec<u64>> = HashMap::new();
        for (&s, cell) in strata.iter().zip(cell_of) {
            map.entry(s).or_insert_with(|| vec![0; cells])[cell] += 1;
        }
        let mut out: Vec<_> = map.into_iter().collect();
        out.sort_unstable_by_key(|(s, _)| *s);
        out
    }
}

/// Reads a CSV file. With `header` the first non-comment line supplies
/// variable names; otherwise columns are named `X0, X1, ...`.
///
/// Labels are coded `0..k` in order of first appearance within each column.
pub fn load_csv(path: impl AsRef<Path>, header: bool) -> Result<CategoricalDataset> {
    let file = File::open(path)?;
    parse_csv(BufReader::new(file), header)
}

pub fn parse_csv(reader: impl BufRead, header: bool) -> Result<CategoricalDataset> {
    let mut names: Option<Vec<String>> = None;
    let mut codes: Vec<HashMap<String, u32>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    let mut columns: Vec<Vec<u32>> = Vec::new();
    let mut width: Option<usize> = None;

    for (lineno, line) in reader.lines().enumerate() {
        let row = lineno + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match width {
            None => {
                width = Some(cells.len());
                codes = vec![HashMap::new(); cells.len()];
                labels = vec![Vec::new(); cells.len()];
                columns = vec![Vec::new(); cells.len()];
            }
            Some(w) if w != cells.len() => {
                return Err(Error::Format { row, msg: format!("expected {w} fields, found {}", cells.len()) });
            }
            _ => {}
        }
        if header && names.is_none() {
            let mut seen = std::collections::HashSet::new();
            for cell in &cells {
                if cell.is_empty() {
                    return Err(Error::Format { row, msg: "empty column name".into() });
                }
                if !seen.insert(*cell) {
                    return Err(Error::Format { row, msg: format!("duplicate column name `{cell}`") });
                }
            }
            names = Some(cells.iter().map(|s| s.to_string()).collect());
            continue;
        }
        for (v, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::Format { row, msg: format!("missing value in column {}", v + 1) });
            }
            let next = labels[v].len() as u32;
            let code = *codes[v].entry(cell.to_string()).or_insert_with(|| {
                labels[v].push(cell.to_string());
                next
            });
            columns[v].push(code);
        }
    }

    let Some(w) = width else {
        return Err(Error::Format { row: 0, msg: "empty file".into() });
    };
    if columns[0].is_empty() {
        return Err(Error::Format { row: 0, msg: "no data rows".into() });
    }
    let names = names.unwrap_or_else(|| (0..w).map(|i| format!("X{i}")).collect());
    let cards = labels.iter().map(Vec::len).collect();
    CategoricalDataset::with_labels(names, cards, columns, labels)
}

/// Writes the dataset using its labels, so `parse_csv` reproduces it.
pub fn write_csv(ds: &CategoricalDataset, mut out: impl Write, header: bool) -> Result<()> {
    if header {
        writeln!(out, "{}", ds.names.join(","))?;
    }
    let mut line = String::new();
    for i in 0..ds.n_rows {
        line.clear();
        for v in 0..ds.n_vars() {
            if v > 0 {
                line.push(',');
            }
            line.push_str(ds.label(v, ds.columns[v][i]));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Observed counts for a pair of variables, stratified by a conditioning set.
///
/// Only strata that occur in the data are stored; absent strata count as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    n_strata: u64,
    strata: Vec<Stratum>,
    total: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    /// Mixed-radix configuration index over the ascending conditioning set.
    pub index: u64,
    /// `rows * cols` counts, row-major.
    pub counts: Vec<u64>,
}

impl Stratum {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl ContingencyTable {
    /// Builds a table directly from dense `q x r x c` counts.
    pub fn from_dense(counts: &[Vec<Vec<u64>>]) -> Result<Self> {
        let rows = counts.first().map_or(0, Vec::len);
        let cols = counts.first().and_then(|s| s.first()).map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return arg("contingency table needs at least one cell");
        }
        let mut strata = Vec::new();
        let mut total = 0;
        for (s, layer) in counts.iter().enumerate() {
            if layer.len() != rows || layer.iter().any(|r| r.len() != cols) {
                return arg("ragged contingency table");
            }
            let flat: Vec<u64> = layer.iter().flatten().copied().collect();
            let t: u64 = flat.iter().sum();
            if t > 0 {
                strata.push(Stratum { index: s as u64, counts: flat });
                total += t;
            }
        }
        Ok(Self { rows, cols, n_strata: counts.len() as u64, strata, total })
    }

    /// `(r, c, q)`.
    pub fn dims(&self) -> (usize, usize, u64) {
        (self.rows, self.cols, self.n_strata)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Non-empty strata in ascending index order.
    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn get(&self, stratum: u64, i: usize, j: usize) -> u64 {
        match self.strata.binary_search_by_key(&stratum, |s| s.index) {
            Ok(pos) => self.strata[pos].counts[i * self.cols + j],
            Err(_) => 0,
        }
    }

    /// Sums all strata into a single `r x c` table.
    pub fn collapsed(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for s in &self.strata {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    out[i][j] += s.counts[i * self.cols + j];
                }
            }
        }
        out
    }
}

/// Counts rows by `(cond configuration, a, b)`.
///
/// Strata enumerate configurations of `cond` sorted ascending by variable
/// index, in mixed-radix order with the lowest-indexed variable most
/// significant.
pub fn contingency(ds: &CategoricalDataset, a: usize, b: usize, cond: &[usize]) -> Result<ContingencyTable> {
    let v = ds.n_vars();
    if a >= v || b >= v || cond.iter().any(|&c| c >= v) {
        return arg(format!("variable index out of range (dataset has {v} variables)"));
    }
    if a == b {
        return arg("tested variables must differ");
    }
    let mut cond = cond.to_vec();
    cond.sort_unstable();
    cond.dedup();
    if cond.contains(&a) || cond.contains(&b) {
        return arg("tested variables may not appear in the conditioning set");
    }
    let (idx, q) = ds.config_indices(&cond)?;
    let (r, c) = (ds.cardinality(a), ds.cardinality(b));
    let cells = ds.column(a).iter().zip(ds.column(b)).map(|(&x, &y)| x as usize * c + y as usize);
    let strata = group(&idx, q, r * c, cells).into_iter().map(|(index, counts)| Stratum { index, counts }).collect();
    Ok(ContingencyTable { rows: r, cols: c, n_strata: q, strata, total: ds.n_rows() as u64 })
}
