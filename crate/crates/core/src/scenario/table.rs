//! In-memory result tables and their deterministic CSV rendering.

use std::fmt::Write as _;

/// One CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            Cell::Num(v) => out.push_str(&format_number(*v)),
            Cell::Int(v) => {
                let _ = write!(out, "{v}");
            }
            Cell::Text(s) => {
                if s.contains([',', '"', '\n', '\r']) {
                    out.push('"');
                    out.push_str(&s.replace('"', "\"\""));
                    out.push('"');
                } else {
                    out.push_str(s);
                }
            }
            Cell::Empty => {}
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Which columns a plot draws: x against each y, one polyline per distinct
/// value of the optional group column.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PlotSpec {
    pub x: usize,
    pub ys: Vec<usize>,
    pub group: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub plot: PlotSpec,
}

impl Table {
    pub fn new(columns: &[&str], plot: PlotSpec) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), plot }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column; non-numeric cells become NaN.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<Cell> = self.columns.iter().map(|c| Cell::Text(c.clone())).collect();
        for row in std::iter::once(&header).chain(&self.rows) {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

const SIGNIFICANT: usize = 9;

/// `%.9g`-style rendering: 9 significant digits, trailing zeros removed,
/// scientific notation outside 1e-4 <= |v| < 1e9.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(1.0), "1");
        assert_eq!(format_number(-2.5), "-2.5");
        assert_eq!(format_number(6.98209812345), "6.98209812");
        assert_eq!(format_number(0.1 + 0.2), "0.3");
        assert_eq!(format_number(123456789.4), "123456789");
        assert_eq!(format_number(1234567890.0), "1.23456789e+09");
        assert_eq!(format_number(1e-4), "0.0001");
        assert_eq!(format_number(8.45817904e-5), "8.45817904e-05");
        assert_eq!(format_number(1.5e-7), "1.5e-07");
        assert_eq!(format_number(9.999999999), "10");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["label", "x_GHz"], PlotSpec::default());
        t.push(vec!["a,b".into(), 1.25.into()]);
        t.push(vec![Cell::Empty, Cell::Int(3)]);
        assert_eq!(t.to_csv(), "label,x_GHz\n\"a,b\",1.25\n,3\n");
        assert_eq!(t.column("x_GHz").unwrap(), vec![1.25, 3.0]);
    }
}
