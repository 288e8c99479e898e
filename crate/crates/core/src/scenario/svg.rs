//! Minimal SVG line plots: axes, ticks, labels and one polyline per series.

use std::fmt::Write as _;

use super::table::{format_number, Table};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn series(table: &Table) -> Vec<Series> {
    let spec = &table.plot;
    let mut out: Vec<Series> = Vec::new();
    for &y in &spec.ys {
        let mut by_group: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
        for row in &table.rows {
            let (Some(xv), Some(yv)) = (row[spec.x].as_f64(), row[y].as_f64()) else { continue };
            if !xv.is_finite() || !yv.is_finite() {
                continue;
            }
            let key = spec.group.map(|g| match &row[g] {
                super::table::Cell::Num(v) => format_number(*v),
                super::table::Cell::Int(v) => v.to_string(),
                super::table::Cell::Text(s) => s.clone(),
                super::table::Cell::Empty => String::new(),
            });
            let key = key.unwrap_or_default();
            match by_group.iter_mut().find(|(k, _)| *k == key) {
                Some((_, pts)) => pts.push((xv, yv)),
                None => by_group.push((key, vec![(xv, yv)])),
            }
        }
        for (key, points) in by_group {
            let label = match spec.group {
                Some(g) => format!("{} ({}={})", table.columns[y], table.columns[g], key),
                None => table.columns[y].clone(),
            };
            out.push(Series { label, points });
        }
    }
    out
}

/// Renders the table's plot specification as an SVG document.
pub fn render_svg(table: &Table, title: &str) -> String {
    let all = series(table);
    let pts = all.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 <= 0.0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 <= 0.0 {
        let pad = 0.5 * y0.abs().max(1.0);
        y0 -= pad;
        y1 += pad;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(s, "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">{}</text>", LEFT + pw / 2.0, escape(title));
    let _ = writeln!(
        s,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(s, "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>", TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(s, "<text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", TOP + ph + 18.0, format_number(t));
    }
    for t in nice_ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(s, "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>", LEFT - 5.0);
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>", LEFT - 8.0, y + 4.0, format_number(t));
    }
    let xlabel = table.columns.get(table.plot.x).map(String::as_str).unwrap_or("");
    let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", LEFT + pw / 2.0, HEIGHT - 15.0, escape(xlabel));
    for (i, ser) in all.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let mut pts = String::new();
        for &(x, y) in &ser.points {
            let _ = write!(pts, "{:.2},{:.2} ", sx(x), sy(y));
        }
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>", pts.trim_end());
        let ly = TOP + 14.0 + 16.0 * i as f64;
        let lx = LEFT + pw + 10.0;
        let _ = writeln!(s, "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>", lx + 18.0);
        let _ = writeln!(s, "<text x=\"{}\" y=\"{}\">{}</text>", lx + 22.0, ly + 4.0, escape(&ser.label));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::table::{Cell, PlotSpec};
    use super::*;

    #[test]
    fn renders_polylines_per_group() {
        let mut t = Table::new(&["g", "x", "y"], PlotSpec { x: 1, ys: vec![2], group: Some(0) });
        for g in [1.0, 2.0] {
            for x in 0..4 {
                t.push(vec![Cell::Num(g), Cell::Num(x as f64), Cell::Num(g * x as f64)]);
            }
        }
        let svg = render_svg(&t, "demo & test");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("demo &amp; test"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_table_still_renders() {
        let t = Table::new(&["x", "y"], PlotSpec { x: 0, ys: vec![1], group: None });
        assert!(render_svg(&t, "empty").contains("<svg"));
    }
}
