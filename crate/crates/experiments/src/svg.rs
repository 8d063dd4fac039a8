//! Static single-file SVG plots: labelled scatter and heatmap.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

fn plot_w() -> f64 {
    WIDTH - LEFT - RIGHT
}

fn plot_h() -> f64 {
    HEIGHT - TOP - BOTTOM
}

pub struct Axes {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Axes {
    fn x(&self, v: f64) -> f64 {
        let (a, b) = self.x_range;
        LEFT + (v - a) / (b - a) * plot_w()
    }

    fn y(&self, v: f64) -> f64 {
        let (a, b) = self.y_range;
        TOP + plot_h() - (v - a) / (b - a) * plot_h()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, axes: &Axes) {
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>
<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>
<text transform="translate(18 {:.1}) rotate(-90)" text-anchor="middle">{}</text>
"#,
        LEFT + plot_w() / 2.0,
        escape(&axes.title),
        LEFT + plot_w() / 2.0,
        HEIGHT - 12.0,
        escape(&axes.x_label),
        TOP + plot_h() / 2.0,
        escape(&axes.y_label),
    );
}

fn frame(out: &mut String, axes: &Axes) {
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        plot_w(),
        plot_h()
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = axes.x_range.0 + f * (axes.x_range.1 - axes.x_range.0);
        let yv = axes.y_range.0 + f * (axes.y_range.1 - axes.y_range.0);
        let (px, py) = (axes.x(xv), axes.y(yv));
        let _ = writeln!(
            out,
            r#"<line x1="{px:.1}" y1="{:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/><text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + plot_h(),
            TOP + plot_h() + 5.0,
            TOP + plot_h() + 18.0,
            tick(xv)
        );
        let _ = writeln!(
            out,
            r#"<line x1="{:.1}" y1="{py:.1}" x2="{LEFT}" y2="{py:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub radius: f64,
    pub points: Vec<(f64, f64)>,
}

pub fn scatter(axes: &Axes, series: &[Series<'_>]) -> String {
    let mut out = String::new();
    header(&mut out, axes);
    for (k, s) in series.iter().enumerate() {
        let _ = writeln!(out, r#"<g fill="{}">"#, s.color);
        for &(x, y) in &s.points {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="{}"/>"#,
                axes.x(x),
                axes.y(y),
                s.radius
            );
        }
        out.push_str("</g>\n");
        let ly = TOP + 12.0 + 18.0 * k as f64;
        let lx = LEFT + plot_w() + 12.0;
        let _ = writeln!(
            out,
            r#"<circle cx="{lx:.1}" cy="{:.1}" r="4" fill="{}"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 4.0,
            s.color,
            lx + 8.0,
            escape(s.label)
        );
    }
    frame(&mut out, axes);
    out.push_str("</svg>\n");
    out
}

/// Five-stop approximation of the viridis map.
fn color(v: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let v = if v.is_finite() {
        v.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let pos = v * (STOPS.len() - 1) as f64;
    let i = (pos.floor() as usize).min(STOPS.len() - 2);
    let f = pos - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + f * (q - p)).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

/// `values[row][col]`; row 0 is drawn at the bottom. Cell centres are
/// placed at `x_range` / `y_range` ends so ticks label cell centres.
/// Colors are scaled to the maximum entry.
pub fn heatmap(axes: &Axes, values: &[Vec<f64>]) -> String {
    let mut out = String::new();
    header(&mut out, axes);
    let rows = values.len();
    let cols = values.first().map_or(0, Vec::len);
    let max = values.iter().flatten().cloned().fold(0.0_f64, f64::max);
    let scale = if max > 0.0 { max } else { 1.0 };
    let cw = plot_w() / cols.max(1) as f64;
    let ch = plot_h() / rows.max(1) as f64;
    for (r, row) in values.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                LEFT + c as f64 * cw,
                TOP + plot_h() - (r + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                color(v / scale)
            );
        }
    }
    // colour bar
    let bx = LEFT + plot_w() + 20.0;
    for k in 0..50 {
        let f = k as f64 / 49.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bx:.1}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#,
            TOP + plot_h() * (1.0 - (k + 1) as f64 / 50.0),
            plot_h() / 50.0 + 0.05,
            color(f)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}">{}</text><text x="{:.1}" y="{:.1}">0</text>"#,
        bx + 18.0,
        TOP + 10.0,
        tick(scale),
        bx + 18.0,
        TOP + plot_h()
    );
    let framed = Axes {
        title: String::new(),
        x_label: String::new(),
        y_label: String::new(),
        x_range: half_cell(axes.x_range, cols),
        y_range: half_cell(axes.y_range, rows),
    };
    frame_ticks_only(&mut out, &framed, axes);
    out.push_str("</svg>\n");
    out
}

/// Widens a centre-to-centre range by half a cell on both sides.
fn half_cell((a, b): (f64, f64), cells: usize) -> (f64, f64) {
    if cells <= 1 || a == b {
        return (a - 0.5, b + 0.5);
    }
    let h = 0.5 * (b - a) / (cells - 1) as f64;
    (a - h, b + h)
}

/// Frame with ticks at cell centres; `edges` maps values to pixels.
fn frame_ticks_only(out: &mut String, edges: &Axes, centres: &Axes) {
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
        plot_w(),
        plot_h()
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let xv = centres.x_range.0 + f * (centres.x_range.1 - centres.x_range.0);
        let yv = centres.y_range.0 + f * (centres.y_range.1 - centres.y_range.0);
        let (px, py) = (edges.x(xv), edges.y(yv));
        let _ = writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            TOP + plot_h() + 18.0,
            tick(xv),
            LEFT - 8.0,
            py + 4.0,
            tick(yv)
        );
    }
}
