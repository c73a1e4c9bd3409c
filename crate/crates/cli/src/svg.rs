//! Bare-bones static plots. The CSV files remain the data of record.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;
const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Frame {
        let mut f = Frame { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: f64::INFINITY, y1: f64::NEG_INFINITY };
        for &(x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            return Frame { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 };
        }
        if f.x1 <= f.x0 {
            f.x1 = f.x0 + 1.0;
        }
        if f.y1 <= f.y0 {
            f.y0 -= 0.5;
            f.y1 += 0.5;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
}

/// Frame and labels; tick values only when `f` is given.
fn axes(out: &mut String, f: Option<&Frame>, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    if let Some(f) = f {
        let _ = writeln!(out, r#"<text x="{PAD}" y="{}">{:.3}</text>"#, H - PAD + 15.0, f.x0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, W - PAD, H - PAD + 15.0, f.x1);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, PAD - 4.0, H - PAD, f.y0);
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{:.3}</text>"#, PAD - 4.0, PAD + 10.0, f.y1);
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, W / 2.0, H - 10.0, escape(xlabel));
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(ylabel)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Polylines, one per named series.
pub fn line_plot(title: &str, xlabel: &str, ylabel: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let f = Frame::fit(series.iter().flat_map(|(_, p)| p.iter()));
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, Some(&f), xlabel, ylabel);
    for (k, (name, pts)) in series.iter().enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", f.px(x), f.py(y)))
            .collect();
        let _ = writeln!(out, r#"<polyline fill="none" stroke="{colour}" points="{}"/>"#, path.join(" "));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">{}</text>"#,
            W - PAD - 120.0,
            PAD + 15.0 * (k as f64 + 1.0),
            escape(name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Points coloured by category.
pub fn scatter_plot(title: &str, xlabel: &str, ylabel: &str, points: &[(f64, f64, &str)]) -> String {
    let pairs: Vec<(f64, f64)> = points.iter().map(|&(x, y, _)| (x, y)).collect();
    let f = Frame::fit(pairs.iter());
    let mut cats: Vec<&str> = points.iter().map(|p| p.2).collect();
    cats.sort_unstable();
    cats.dedup();
    let mut out = String::new();
    open(&mut out, title);
    axes(&mut out, Some(&f), xlabel, ylabel);
    for &(x, y, c) in points.iter().filter(|(x, y, _)| x.is_finite() && y.is_finite()) {
        let k = cats.iter().position(|&d| d == c).unwrap_or(0);
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
            f.px(x),
            f.py(y),
            COLOURS[k % COLOURS.len()]
        );
    }
    for (k, c) in cats.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{}">{}</text>"#,
            W - PAD - 120.0,
            PAD + 15.0 * (k as f64 + 1.0),
            COLOURS[k % COLOURS.len()],
            escape(c)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Grey-scale image of a row-major `rows x cols` matrix; row 0 at the left.
pub fn heat_map(title: &str, xlabel: &str, ylabel: &str, rows: usize, cols: usize, values: &[f64]) -> String {
    let hi = values.iter().copied().fold(0.0, f64::max);
    let lo = values.iter().copied().fold(hi, f64::min);
    let span = if hi > lo { hi - lo } else { 1.0 };
    // Coarsen so the file stays small.
    let (bx, by) = (rows.div_ceil(128).max(1), cols.div_ceil(128).max(1));
    let (nx, ny) = (rows.div_ceil(bx), cols.div_ceil(by));
    let (cw, ch) = ((W - 2.0 * PAD) / nx as f64, (H - 2.0 * PAD) / ny as f64);
    let mut out = String::new();
    open(&mut out, title);
    for i in 0..nx {
        for j in 0..ny {
            let mut sum = 0.0;
            let mut n = 0;
            for a in i * bx..((i + 1) * bx).min(rows) {
                for b in j * by..((j + 1) * by).min(cols) {
                    sum += values[a * cols + b];
                    n += 1;
                }
            }
            let level = (255.0 * (1.0 - ((sum / n as f64 - lo) / span).clamp(0.0, 1.0))) as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({level},{level},{level})"/>"#,
                PAD + i as f64 * cw,
                H - PAD - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    axes(&mut out, None, xlabel, ylabel);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plots_are_closed_documents() {
        let l = line_plot("t", "x", "y", &[("a", vec![(0.0, 1.0), (1.0, 2.0)])]);
        let s = scatter_plot("t", "x", "y", &[(0.0, 1.0, "stable"), (1.0, f64::NAN, "carl")]);
        let h = heat_map("t", "x", "y", 3, 2, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        for doc in [l, s, h] {
            assert!(doc.starts_with("<svg") && doc.ends_with("</svg>\n"));
            assert!(!doc.contains("NaN"));
        }
    }
}
