//! Line charts rendered to SVG.

use std::path::Path;

use plotters::coord::ranged1d::ValueFormatter;
use plotters::coord::types::RangedCoordf64;
use plotters::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
    /// Index into the palette, so that related curves share a colour.
    pub color: usize,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

const PALETTE: [RGBColor; 8] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(255, 127, 14),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
    RGBColor(227, 119, 194),
    RGBColor(23, 190, 207),
];

fn bounds(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values
        .filter(|v| v.is_finite())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.04 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

type DrawResult<T> = Result<T, Box<dyn std::error::Error>>;

pub fn render(chart: &Chart, path: &Path) -> DrawResult<()> {
    let points = || chart.series.iter().flat_map(|s| s.points.iter().copied());
    let (x_lo, x_hi) = bounds(points().map(|p| p.0).filter(|&x| !chart.log_x || x > 0.0)).unwrap_or((1.0, 2.0));
    let (y_lo, y_hi) = padded_y(bounds(points().map(|p| p.1)).unwrap_or((0.0, 1.0)));

    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE)?;
    let mut builder = ChartBuilder::on(&root);
    builder
        .caption(&chart.title, ("sans-serif", 22))
        .margin(16)
        .x_label_area_size(44)
        .y_label_area_size(64);
    if chart.log_x {
        let (lo, hi) = if x_hi > x_lo { (x_lo, x_hi) } else { (x_lo / 2.0, x_lo * 2.0) };
        let mut ctx = builder.build_cartesian_2d((lo..hi).log_scale(), y_lo..y_hi)?;
        draw(&mut ctx, chart)?;
    } else {
        let (lo, hi) = padded(x_lo, x_hi);
        let mut ctx = builder.build_cartesian_2d(lo..hi, y_lo..y_hi)?;
        draw(&mut ctx, chart)?;
    }
    root.present()?;
    Ok(())
}

/// Nonnegative data keep zero as the bottom of the axis.
fn padded_y((lo, hi): (f64, f64)) -> (f64, f64) {
    let (p_lo, p_hi) = padded(lo, hi);
    (if lo >= 0.0 { 0.0 } else { p_lo }, p_hi)
}

fn draw<'a, X>(ctx: &mut ChartContext<'a, SVGBackend<'a>, Cartesian2d<X, RangedCoordf64>>, chart: &Chart) -> DrawResult<()>
where
    X: Ranged<ValueType = f64> + ValueFormatter<f64>,
{
    ctx.configure_mesh()
        .x_desc(chart.x_label.as_str())
        .y_desc(chart.y_label.as_str())
        .light_line_style(WHITE.mix(0.0))
        .draw()?;
    for s in &chart.series {
        let color = PALETTE[s.color % PALETTE.len()];
        let pts: Vec<(f64, f64)> = s.points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
        let legend_style = color.stroke_width(2);
        match s.style {
            Style::Line => {
                ctx.draw_series(LineSeries::new(pts, legend_style))?
                    .label(&s.label)
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 20, y)], legend_style));
            }
            Style::Dashed => {
                ctx.draw_series(DashedLineSeries::new(pts, 6, 4, legend_style))?
                    .label(&s.label)
                    .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 8, y)], legend_style));
            }
            Style::Markers => {
                ctx.draw_series(pts.into_iter().map(|p| Circle::new(p, 4, color.stroke_width(1))))?
                    .label(&s.label)
                    .legend(move |(x, y)| Circle::new((x + 10, y), 4, color.stroke_width(1)));
            }
        }
    }
    ctx.configure_series_labels()
        .background_style(WHITE.mix(0.85))
        .border_style(BLACK.mix(0.4))
        .position(SeriesLabelPosition::UpperRight)
        .draw()?;
    Ok(())
}
