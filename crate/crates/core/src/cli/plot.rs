//! Minimal self-contained SVG line plots of sweep results.

use std::fmt::Write as _;

use crate::cli::output::RunManifest;
use crate::config::Topology;
use crate::simulator::SweepResult;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 120.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

pub fn topology_color(t: Topology) -> &'static str {
    match t {
        Topology::Bus => "blue",
        Topology::Tree => "red",
        Topology::Chain => "green",
    }
}

/// `12_500_000.0` → `"12.5M"`.
pub fn si_label(v: f64) -> String {
    let (scaled, prefix) = [(1e9, "G"), (1e6, "M"), (1e3, "k")]
        .into_iter()
        .find(|&(f, _)| v.abs() >= f)
        .map_or((v, ""), |(f, p)| (v / f, p));
    let mut s = format!("{scaled:.2}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    format!("{s}{prefix}")
}

/// Smallest 1/2/5 × 10^k at or above `v`.
fn nice_ceil(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let base = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * base)
        .find(|&c| c >= v)
        .unwrap_or(10.0 * base)
}

struct Series {
    topology: Topology,
    points: Vec<(f64, f64)>,
}

struct Frame {
    x_max: f64,
    y_max: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + x / self.x_max * (WIDTH - LEFT - RIGHT)
    }
    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - y / self.y_max * (HEIGHT - TOP - BOTTOM)
    }
}

fn render(
    manifest: &RunManifest,
    title: &str,
    y_label: &str,
    series: &[Series],
    frame: &Frame,
    y_tick: impl Fn(f64) -> String,
) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    let provenance = serde_json::to_string(manifest).expect("manifest serializes").replace("--", "- -");
    writeln!(s, "<!-- {provenance} -->").unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#,
        WIDTH / 2.0
    )
    .unwrap();

    let (x0, x1) = (frame.px(0.0), frame.px(frame.x_max));
    let (y0, y1) = (frame.py(0.0), frame.py(frame.y_max));
    writeln!(s, r#"<g stroke="black" stroke-width="1">"#).unwrap();
    writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#).unwrap();
    writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#).unwrap();
    writeln!(s, "</g>").unwrap();

    writeln!(s, r#"<g font-family="sans-serif" font-size="11" fill="black">"#).unwrap();
    for k in 0..=5 {
        let xv = frame.x_max * k as f64 / 5.0;
        let yv = frame.y_max * k as f64 / 5.0;
        let (xp, yp) = (frame.px(xv), frame.py(yv));
        writeln!(
            s,
            r##"<line x1="{xp:.2}" y1="{y0:.2}" x2="{xp:.2}" y2="{:.2}" stroke="black"/><text x="{xp:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
            y0 + 5.0,
            y0 + 18.0,
            si_label(xv)
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{:.2}" y1="{yp:.2}" x2="{x1:.2}" y2="{yp:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
            x0,
            x0 - 6.0,
            yp + 4.0,
            y_tick(yv)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">density (covered area / territory)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();
    writeln!(s, "</g>").unwrap();

    for (i, ser) in series.iter().enumerate() {
        let color = topology_color(ser.topology);
        let pts: Vec<String> = ser
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline class="series" data-topology="{}" fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            ser.topology,
            pts.join(" ")
        )
        .unwrap();
        let ly = TOP + 20.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            ser.topology
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn collect(result: &SweepResult, value: impl Fn(&crate::simulator::SweepRow) -> Option<f64>) -> Vec<Series> {
    Topology::ALL
        .into_iter()
        .filter(|t| result.rows.iter().any(|r| r.topology == *t))
        .map(|topology| {
            let mut points: Vec<(f64, f64)> = result
                .rows
                .iter()
                .filter(|r| r.topology == topology)
                .filter_map(|r| value(r).map(|v| (r.density, v)))
                .collect();
            points.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series { topology, points }
        })
        .collect()
}

fn x_extent(result: &SweepResult) -> f64 {
    result.rows.iter().map(|r| r.density).fold(1.0, f64::max)
}

/// Reachability (%) against density, one line per topology.
pub fn reachability_plot(manifest: &RunManifest, result: &SweepResult) -> String {
    let series = collect(result, |r| r.reachability.mean.map(|m| 100.0 * m));
    let frame = Frame {
        x_max: x_extent(result),
        y_max: 100.0,
    };
    render(manifest, "Reached cells vs. density", "reached cells (%)", &series, &frame, |v| {
        format!("{v:.0}")
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrafficStat {
    Average,
    Maximum,
}

/// Mean hub traffic (average or peak) against density.
pub fn traffic_plot(manifest: &RunManifest, result: &SweepResult, stat: TrafficStat) -> String {
    let series = collect(result, |r| match stat {
        TrafficStat::Average => r.avg_rate_bps.mean,
        TrafficStat::Maximum => r.max_rate_bps.mean,
    });
    let top = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.1))
        .fold(0.0, f64::max);
    let frame = Frame {
        x_max: x_extent(result),
        y_max: nice_ceil(top),
    };
    let (title, label) = match stat {
        TrafficStat::Average => ("Average hub traffic vs. density", "average rate (bit/s)"),
        TrafficStat::Maximum => ("Maximum hub traffic vs. density", "maximum rate (bit/s)"),
    };
    render(manifest, title, label, &series, &frame, si_label)
}
