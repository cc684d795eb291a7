//! Self-contained SVG line charts. No rendering dependency: the chart is
//! assembled as text, which keeps artifacts diffable in tests.

use crate::error::CliError;

/// Upper bound on polyline points per series; longer series are decimated.
pub const MAX_PLOT_POINTS: usize = 4000;

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 200.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// One named line of the chart.
#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

/// Reduces a series to at most `max_points` points while keeping the
/// min/max envelope: the points are split into buckets and each bucket
/// contributes its minimum and maximum, in x order.
pub fn decimate(points: &[(f64, f64)], max_points: usize) -> Vec<(f64, f64)> {
    assert!(max_points >= 2);
    if points.len() <= max_points {
        return points.to_vec();
    }
    let buckets = max_points / 2;
    let mut out = Vec::with_capacity(buckets * 2);
    for b in 0..buckets {
        let lo = b * points.len() / buckets;
        let hi = ((b + 1) * points.len() / buckets).max(lo + 1);
        let chunk = &points[lo..hi];
        let (mut imin, mut imax) = (0usize, 0usize);
        for (i, p) in chunk.iter().enumerate() {
            if p.1 < chunk[imin].1 {
                imin = i;
            }
            if p.1 > chunk[imax].1 {
                imax = i;
            }
        }
        let (first, second) = (imin.min(imax), imin.max(imax));
        out.push(chunk[first]);
        if second != first {
            out.push(chunk[second]);
        }
    }
    out
}

fn escape_xml(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A round tick spacing (1, 2, or 5 times a power of ten) giving at most
/// `target` intervals over `range`.
fn tick_step(range: f64, target: usize) -> f64 {
    let raw = range / target as f64;
    let magnitude = 10f64.powf(raw.log10().floor());
    for multiple in [1.0, 2.0, 5.0, 10.0] {
        if magnitude * multiple >= raw {
            return magnitude * multiple;
        }
    }
    magnitude * 10.0
}

fn ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    let step = tick_step(max - min, target);
    let mut t = (min / step).ceil() * step;
    let mut out = Vec::new();
    while t <= max + step * 1e-9 {
        out.push(t);
        t += step;
    }
    out
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else {
        format!("{v}")
    }
}

/// Renders named series into a standalone SVG line chart with labeled axes,
/// a legend, and the metadata embedded as XML comments.
pub fn render_line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[PlotSeries],
    meta: &[String],
) -> Result<String, CliError> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(CliError::Usage("nothing to plot: no points".into()));
    }

    let decimated: Vec<PlotSeries> = series
        .iter()
        .map(|s| PlotSeries {
            name: s.name.clone(),
            points: decimate(&s.points, MAX_PLOT_POINTS),
        })
        .collect();

    let all = decimated.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    for line in meta {
        out.push_str(&format!("<!-- {} -->\n", escape_xml(line)));
    }
    out.push_str(&format!(
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"28\" font-family=\"sans-serif\" font-size=\"17\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        escape_xml(title)
    ));

    // axes, ticks, grid
    out.push_str("<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n");
    for x in ticks(x_min, x_max, 8) {
        let px = sx(x);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        ));
        out.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            format_tick(x)
        ));
    }
    for y in ticks(y_min, y_max, 6) {
        let py = sy(y);
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>\n",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            py + 4.0,
            format_tick(y)
        ));
    }
    out.push_str("</g>\n");
    out.push_str(&format!(
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" fill=\"none\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 20.0,
        escape_xml(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"24\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 24 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape_xml(y_label)
    ));

    // series
    for (i, s) in decimated.iter().enumerate() {
        if s.points.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut path = String::new();
        for (j, &(x, y)) in s.points.iter().enumerate() {
            if j > 0 {
                path.push(' ');
            }
            path.push_str(&format!("{:.2},{:.2}", sx(x), sy(y)));
        }
        out.push_str(&format!(
            "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>\n"
        ));
    }

    // legend
    out.push_str("<g font-family=\"sans-serif\" font-size=\"12\">\n");
    for (i, s) in decimated.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = MARGIN_TOP + 12.0 + i as f64 * 18.0;
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            MARGIN_LEFT + plot_w + 12.0,
            MARGIN_LEFT + plot_w + 36.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\">{}</text>\n",
            MARGIN_LEFT + plot_w + 42.0,
            y + 4.0,
            escape_xml(&s.name)
        ));
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_series_pass_through_decimation() {
        let points: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, (i * i) as f64)).collect();
        assert_eq!(decimate(&points, 4000), points);
    }

    #[test]
    fn decimation_bounds_points_and_keeps_the_envelope() {
        let points: Vec<(f64, f64)> = (0..50_000)
            .map(|i| {
                let x = i as f64;
                (x, (x * 0.01).sin() * 100.0 + ((i * 2_654_435_761usize) % 97) as f64)
            })
            .collect();
        let reduced = decimate(&points, MAX_PLOT_POINTS);
        assert!(reduced.len() <= MAX_PLOT_POINTS);
        let min = |ps: &[(f64, f64)]| ps.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let max = |ps: &[(f64, f64)]| ps.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(min(&reduced), min(&points));
        assert_eq!(max(&reduced), max(&points));
        assert!(reduced.windows(2).all(|w| w[0].0 <= w[1].0));
    }

    #[test]
    fn constant_series_renders_a_horizontal_line() {
        let series = [PlotSeries {
            name: "flat".into(),
            points: (0..10).map(|i| (i as f64, 5.0)).collect(),
        }];
        let svg = render_line_chart("t", "step", "LZ complexity", &series, &[]).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains(">step<"));
        assert!(svg.contains(">LZ complexity<"));
    }

    #[test]
    fn multiple_series_get_a_legend_entry_each() {
        let mk = |name: &str, offset: f64| PlotSeries {
            name: name.into(),
            points: (0..20).map(|i| (i as f64, offset + i as f64)).collect(),
        };
        let svg = render_line_chart(
            "t",
            "step",
            "LZ complexity",
            &[mk("a", 0.0), mk("b", 5.0), mk("c", 10.0)],
            &["rule: 110".into()],
        )
        .unwrap();
        assert_eq!(svg.matches("<polyline").count(), 3);
        assert!(svg.contains(">a<") && svg.contains(">b<") && svg.contains(">c<"));
        assert!(svg.contains("<!-- rule: 110 -->"));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(render_line_chart("t", "x", "y", &[], &[]).is_err());
    }
}
