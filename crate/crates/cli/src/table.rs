//! Row-oriented result tables and their CSV rendering.

use percolab::report::{fmt_float, EstimateReport};

/// One output cell; floats are rendered at 12 significant digits.
#[derive(Clone, Debug)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => fmt_float(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Text(String::new()), Into::into)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn estimates(rows: &[EstimateReport]) -> Self {
        let mut t = Self::new(&["experiment", "source_hash", "p", "radius", "replicas", "estimate", "ci_lo", "ci_hi", "seed"]);
        for r in rows {
            t.push(estimate_cells(r));
        }
        t
    }

    /// CSV with a leading `config_hash` column on every row.
    pub fn to_csv(&self, config_hash: &str) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(std::iter::once("config_hash").chain(self.header.iter().map(String::as_str)))?;
        for row in &self.rows {
            w.write_record(std::iter::once(config_hash.to_string()).chain(row.iter().map(Cell::render)))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }
}

pub fn estimate_cells(r: &EstimateReport) -> Vec<Cell> {
    vec![
        r.experiment.as_str().into(),
        r.source_hash.as_str().into(),
        r.p.into(),
        r.radius.into(),
        r.replicas.into(),
        r.estimate.into(),
        r.ci_lo.into(),
        r.ci_hi.into(),
        r.seed.into(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_hash_column_and_quotes() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![1.5.into(), "x,y".into()]);
        let s = t.to_csv("h").unwrap();
        assert_eq!(s, "config_hash,a,b\nh,1.50000000000e0,\"x,y\"\n");
    }
}
