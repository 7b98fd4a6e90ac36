//! Minimal SVG 1.1 line charts: stacked panels sharing an x axis, one
//! `<polyline>` per series.

use std::fmt::Write;

use super::format::sig6;
use crate::performance::PerformanceRow;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 320.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_Y: f64 = 40.0;
const TICKS: usize = 5;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

pub struct Panel {
    pub y_label: String,
    pub series: Vec<Series>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub panels: Vec<Panel>,
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl Chart {
    pub fn render(&self) -> String {
        let all_x = || self.panels.iter().flat_map(|p| p.series.iter().flat_map(|s| s.points.iter().map(|q| q.0)));
        let (x_lo, x_hi) = bounds(all_x());
        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let height = MARGIN_Y + self.panels.len() as f64 * (PANEL_HEIGHT + MARGIN_Y);
        let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;

        let mut out = String::new();
        writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="12">"#
        )
        .unwrap();
        writeln!(out, r#"<rect width="{WIDTH}" height="{height}" fill="white"/>"#).unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        )
        .unwrap();

        let mut colour = 0;
        for (k, panel) in self.panels.iter().enumerate() {
            let top = MARGIN_Y + k as f64 * (PANEL_HEIGHT + MARGIN_Y);
            let bottom = top + PANEL_HEIGHT;
            let (y_lo, y_hi) = bounds(panel.series.iter().flat_map(|s| s.points.iter().map(|q| q.1)));
            let sy = |y: f64| bottom - (y - y_lo) / (y_hi - y_lo) * PANEL_HEIGHT;

            writeln!(
                out,
                r#"<rect x="{MARGIN_LEFT}" y="{top}" width="{plot_w}" height="{PANEL_HEIGHT}" fill="none" stroke="black"/>"#
            )
            .unwrap();
            for i in 0..TICKS {
                let t = i as f64 / (TICKS - 1) as f64;
                let xv = x_lo + t * (x_hi - x_lo);
                let yv = y_lo + t * (y_hi - y_lo);
                writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                    sx(xv),
                    bottom + 16.0,
                    sig6(xv)
                )
                .unwrap();
                writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                    MARGIN_LEFT - 6.0,
                    sy(yv) + 4.0,
                    sig6(yv)
                )
                .unwrap();
            }
            writeln!(
                out,
                r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
                top + PANEL_HEIGHT / 2.0,
                top + PANEL_HEIGHT / 2.0,
                escape(&panel.y_label)
            )
            .unwrap();

            for (j, s) in panel.series.iter().enumerate() {
                let c = PALETTE[colour % PALETTE.len()];
                colour += 1;
                let pts: Vec<String> = s
                    .points
                    .iter()
                    .filter(|p| p.0.is_finite() && p.1.is_finite())
                    .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                    .collect();
                writeln!(out, r#"<polyline fill="none" stroke="{c}" stroke-width="1.5" points="{}"/>"#, pts.join(" "))
                    .unwrap();
                let ly = top + 16.0 + 18.0 * j as f64;
                let lx = MARGIN_LEFT + plot_w + 12.0;
                writeln!(
                    out,
                    r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{c}" stroke-width="2"/>"#,
                    lx + 20.0
                )
                .unwrap();
                writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&s.name)).unwrap();
            }
        }
        let last_bottom = height - MARGIN_Y;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            MARGIN_LEFT + plot_w / 2.0,
            last_bottom + 32.0,
            escape(&self.x_label)
        )
        .unwrap();
        out.push_str("</svg>\n");
        out
    }
}

fn series(name: &str, rows: &[&PerformanceRow], f: impl Fn(&PerformanceRow) -> (f64, f64)) -> Series {
    Series { name: name.to_string(), points: rows.iter().map(|r| f(r)).collect() }
}

/// The four sweep figures as `(file suffix, chart)`, from rows with status `ok`.
pub fn sweep_charts(rows: &[PerformanceRow]) -> Vec<(&'static str, Chart)> {
    let ok: Vec<&PerformanceRow> = rows.iter().filter(|r| r.is_ok()).collect();
    vec![
        (
            "beta_gamma",
            Chart {
                title: "Passive angle against input angle".into(),
                x_label: "beta (rad)".into(),
                panels: vec![Panel {
                    y_label: "gamma (rad)".into(),
                    series: vec![series("gamma", &ok, |r| (r.beta, r.gamma))],
                }],
            },
        ),
        (
            "lengths_gamma",
            Chart {
                title: "Palm lengths against passive angle".into(),
                x_label: "gamma (rad)".into(),
                panels: vec![Panel {
                    y_label: "length (mm)".into(),
                    series: vec![
                        series("L1", &ok, |r| (r.gamma, r.l1)),
                        series("L2", &ok, |r| (r.gamma, r.l2)),
                        series("L3", &ok, |r| (r.gamma, r.l3)),
                    ],
                }],
            },
        ),
        (
            "jacobian_stiffness",
            Chart {
                title: "Jacobian and output stiffness".into(),
                x_label: "L1 (mm)".into(),
                panels: vec![
                    Panel { y_label: "J = dL3/dL1".into(), series: vec![series("J", &ok, |r| (r.l1, r.jacobian))] },
                    Panel {
                        y_label: "K_L3 (N/mm)".into(),
                        series: vec![series("K_L3", &ok, |r| (r.l1, r.stiffness_out))],
                    },
                ],
            },
        ),
        (
            "transmission",
            Chart {
                title: "Transmission indices".into(),
                x_label: "L1 (mm)".into(),
                panels: vec![Panel {
                    y_label: "index".into(),
                    series: vec![
                        series("zeta", &ok, |r| (r.l1, r.zeta)),
                        series("sigma", &ok, |r| (r.l1, r.sigma)),
                        series("kappa", &ok, |r| (r.l1, r.kappa)),
                    ],
                }],
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_polyline_per_series() {
        let chart = Chart {
            title: "t <&>".into(),
            x_label: "x".into(),
            panels: vec![Panel {
                y_label: "y".into(),
                series: vec![
                    Series { name: "a".into(), points: vec![(0.0, 1.0), (1.0, 2.0)] },
                    Series { name: "b".into(), points: vec![(0.0, 3.0), (1.0, f64::NAN)] },
                ],
            }],
        };
        let svg = chart.render();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("t &lt;&amp;&gt;"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
