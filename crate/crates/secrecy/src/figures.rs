//! Presets that regenerate the data behind each published figure.
//!
//! System constants, trial count, seed and model switches come from the
//! caller's [`Settings`]; geometry, antennas and axes are fixed per figure.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use secrecy_core::{OptResult, Scheme};

use crate::config::{spaced, Settings};
use crate::experiment::{allocate, attach_mc, evaluate, evaluate_all, optimize, Point, Row, Tasks};
use crate::plot::{Chart, Series, Style};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Outage,
    RateDistance,
    Strategies,
    OutageTarget,
    RelayAntennas,
    EveAntennas,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Outage,
        FigureId::RateDistance,
        FigureId::Strategies,
        FigureId::OutageTarget,
        FigureId::RelayAntennas,
        FigureId::EveAntennas,
    ];

    /// The figure number used on the command line and in file names.
    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Outage => "1",
            FigureId::RateDistance => "2",
            FigureId::Strategies => "3",
            FigureId::OutageTarget => "4",
            FigureId::RelayAntennas => "5a",
            FigureId::EveAntennas => "5b",
        }
    }

    pub fn file_stem(self) -> String {
        format!("fig{}", self.as_str())
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
#[error("unknown figure '{0}' (expected 1, 2, 3, 4, 5a, 5b or all)")]
pub struct UnknownFigure(pub String);

impl FromStr for FigureId {
    type Err = UnknownFigure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("fig").unwrap_or(&t);
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == t)
            .ok_or_else(|| UnknownFigure(s.to_owned()))
    }
}

pub struct Figure {
    pub id: FigureId,
    pub rows: Vec<Row>,
    pub chart: Chart,
}

/// Distances of Eve from the relay used by the distance sweeps, as
/// fractions of `d_AB`.
pub const D_RE_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

/// Outage targets of the φ sweep.
pub const PHI_GRID: [f64; 10] = [1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 0.1, 0.2, 0.5, 1.0];

/// Rate of the fixed-rate strategies.
pub const FIXED_RATE: f64 = 3.0;

pub fn build(id: FigureId, s: &Settings) -> Figure {
    match id {
        FigureId::Outage => outage(s),
        FigureId::RateDistance => rate_distance(s),
        FigureId::Strategies => strategies(s),
        FigureId::OutageTarget => outage_target(s),
        FigureId::RelayAntennas => antennas(s, FigureId::RelayAntennas),
        FigureId::EveAntennas => antennas(s, FigureId::EveAntennas),
    }
}

fn color(scheme: Scheme) -> usize {
    match scheme {
        Scheme::Csidf => 0,
        Scheme::An => 1,
    }
}

fn curve(rows: &[Row], x: impl Fn(&Row) -> f64, y: impl Fn(&Row) -> Option<f64>) -> Vec<(f64, f64)> {
    rows.iter()
        .filter(|r| !r.is_error())
        .filter_map(|r| y(r).map(|v| (x(r), v)))
        .collect()
}

/// Optimizes the points in order, each warm-started from the previous
/// solution.
pub fn optimize_chain(s: &Settings, points: &[Point], series: &str) -> Vec<Row> {
    let mut seeds: Vec<OptResult> = Vec::new();
    let mut rows = Vec::with_capacity(points.len());
    for p in points {
        let (row, result) = optimize(s, p, &seeds, series);
        if let Some(r) = result {
            seeds = vec![r];
        }
        rows.push(row);
    }
    rows
}

/// One chain per scheme, run in parallel and concatenated in scheme order.
fn per_scheme<F>(f: F) -> Vec<Row>
where
    F: Fn(Scheme) -> Vec<Row> + Sync,
{
    Scheme::ALL.par_iter().map(|&sc| f(sc)).collect::<Vec<_>>().concat()
}

/// SOP against transmit power with `P_R = P_A`, exact and simulated.
pub fn outage(s: &Settings) -> Figure {
    let powers = spaced(s.system.p_max_w * 1e-3, s.system.p_max_w, 10, true);
    let rates = [1.0, FIXED_RATE];
    let mut points = Vec::new();
    for scheme in Scheme::ALL {
        for rate in rates {
            for &p in &powers {
                points.push(Point {
                    p_a: p,
                    p_r: p,
                    rate,
                    ..Point::preset(scheme)
                });
            }
        }
    }
    let tasks = Tasks {
        closed_form: true,
        see: false,
        monte_carlo: true,
    };
    let rows = evaluate_all(s, &points, tasks, "exact_vs_mc");
    let mut series = Vec::new();
    for scheme in Scheme::ALL {
        for (k, rate) in rates.into_iter().enumerate() {
            let sel: Vec<Row> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.rate_bpshz == rate)
                .cloned()
                .collect();
            let c = 2 * color(scheme) + k;
            series.push(Series {
                label: format!("{scheme} R={rate} exact"),
                points: curve(&sel, |r| r.p_a_w, |r| r.sop),
                style: Style::Line,
                color: c,
            });
            series.push(Series {
                label: format!("{scheme} R={rate} MC"),
                points: curve(&sel, |r| r.p_a_w, |r| r.sop_mc),
                style: Style::Markers,
                color: c,
            });
        }
    }
    Figure {
        id: FigureId::Outage,
        rows,
        chart: Chart {
            title: "Secrecy outage probability, P_R = P_A".into(),
            x_label: "P_A (W)".into(),
            y_label: "SOP".into(),
            log_x: true,
            series,
        },
    }
}

/// SEE with allocated power over a rate grid at several Eve distances,
/// plus the jointly optimized SEE at each distance.
pub fn rate_distance(s: &Settings) -> Figure {
    let rates = spaced(0.25, 4.0, 16, false);
    let mut points = Vec::new();
    for scheme in Scheme::ALL {
        for d_re_frac in D_RE_GRID {
            for &rate in &rates {
                points.push(Point {
                    rate,
                    d_re_frac,
                    ..Point::preset(scheme)
                });
            }
        }
    }
    let mut rows: Vec<Row> = points.par_iter().map(|p| allocate(s, p, "allocated")).collect();
    let joint: Vec<Point> = Scheme::ALL
        .into_iter()
        .flat_map(|scheme| D_RE_GRID.map(|d_re_frac| Point { d_re_frac, ..Point::preset(scheme) }))
        .collect();
    rows.extend(per_scheme(|scheme| {
        let pts: Vec<Point> = joint.iter().copied().filter(|p| p.scheme == scheme).collect();
        optimize_chain(s, &pts, "joint")
    }));

    let mut series = Vec::new();
    for scheme in Scheme::ALL {
        for (k, d) in [0.25, 1.0, 2.0].into_iter().enumerate() {
            let sel: Vec<Row> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.series == "allocated" && r.d_re_frac == d)
                .cloned()
                .collect();
            series.push(Series {
                label: format!("{scheme} d_RE={d}"),
                points: curve(&sel, |r| r.rate_bpshz, |r| Some(r.feasible_see())),
                style: if scheme == Scheme::Csidf { Style::Line } else { Style::Dashed },
                color: 2 + k,
            });
        }
    }
    Figure {
        id: FigureId::RateDistance,
        rows,
        chart: Chart {
            title: "SEE with allocated power against target rate".into(),
            x_label: "R (bps/Hz)".into(),
            y_label: "SEE ((bps/Hz)/W)".into(),
            log_x: false,
            series,
        },
    }
}

/// SEE of four allocation strategies against Eve's distance.
///
/// `joint` optimizes rate and powers under the outage target. The other
/// three lift the target (φ = 1) because at the fixed rate no power pair
/// meets it: `joint_relaxed` still optimizes everything, `power_only` fixes
/// the rate and `fixed` also fixes both powers at half the budget.
pub fn strategies(s: &Settings) -> Figure {
    let mut rows = per_scheme(|scheme| {
        let at = |d_re_frac: f64, phi: f64| Point {
            d_re_frac,
            phi,
            ..Point::preset(scheme)
        };
        let joint: Vec<Point> = D_RE_GRID.iter().map(|&d| at(d, 0.1)).collect();
        let relaxed: Vec<Point> = D_RE_GRID.iter().map(|&d| at(d, 1.0)).collect();
        let mut out = optimize_chain(s, &joint, "joint");
        out.extend(optimize_chain(s, &relaxed, "joint_relaxed"));
        for p in &relaxed {
            let fixed_rate = Point { rate: FIXED_RATE, ..*p };
            out.push(allocate(s, &fixed_rate, "power_only"));
        }
        let tasks = Tasks {
            closed_form: true,
            see: true,
            monte_carlo: false,
        };
        for p in &relaxed {
            let fixed = Point {
                rate: FIXED_RATE,
                p_a: 0.5 * s.system.p_max_w,
                p_r: 0.5 * s.system.p_max_w,
                ..*p
            };
            out.push(evaluate(s, &fixed, tasks, "fixed"));
        }
        out
    });
    rows.par_iter_mut().for_each(|r| attach_mc(s, r));

    let mut series = Vec::new();
    for scheme in Scheme::ALL {
        for (k, name) in ["joint", "joint_relaxed", "power_only", "fixed"].into_iter().enumerate() {
            let sel: Vec<Row> = rows
                .iter()
                .filter(|r| r.scheme == scheme && r.series == name)
                .cloned()
                .collect();
            let see = |r: &Row| if name == "joint" { Some(r.feasible_see()) } else { r.see };
            series.push(Series {
                label: format!("{scheme} {name}"),
                points: curve(&sel, |r| r.d_re_frac, see),
                style: if scheme == Scheme::Csidf { Style::Line } else { Style::Dashed },
                color: 2 + k,
            });
        }
    }
    Figure {
        id: FigureId::Strategies,
        rows,
        chart: Chart {
            title: "SEE of allocation strategies against Eve distance".into(),
            x_label: "d_RE / d_AB".into(),
            y_label: "SEE ((bps/Hz)/W)".into(),
            log_x: false,
            series,
        },
    }
}

/// Optimized SEE and the SOP it runs at against the outage target.
pub fn outage_target(s: &Settings) -> Figure {
    let rows = per_scheme(|scheme| {
        let pts: Vec<Point> = PHI_GRID.iter().map(|&phi| Point { phi, ..Point::preset(scheme) }).collect();
        optimize_chain(s, &pts, "joint")
    });
    let mut series = Vec::new();
    for scheme in Scheme::ALL {
        let sel: Vec<Row> = rows.iter().filter(|r| r.scheme == scheme).cloned().collect();
        series.push(Series {
            label: format!("{scheme} SEE"),
            points: curve(&sel, |r| r.phi, |r| Some(r.feasible_see())),
            style: Style::Line,
            color: color(scheme),
        });
        series.push(Series {
            label: format!("{scheme} SOP"),
            points: curve(&sel, |r| r.phi, |r| r.feasible.filter(|&f| f).and(r.sop)),
            style: Style::Dashed,
            color: color(scheme),
        });
    }
    Figure {
        id: FigureId::OutageTarget,
        rows,
        chart: Chart {
            title: "Optimized SEE (solid) and its SOP (dashed) against the outage target".into(),
            x_label: "phi".into(),
            y_label: "SEE ((bps/Hz)/W) / SOP".into(),
            log_x: true,
            series,
        },
    }
}

/// Optimized SEE against the antenna count at the relay or at Eve, with
/// `n_A = n_B = 2` for both schemes and Eve at `1.25 d_AB` from the relay.
pub fn antennas(s: &Settings, id: FigureId) -> Figure {
    let counts: Vec<u32> = (1..=6).collect();
    let rows = per_scheme(|scheme| {
        let pts: Vec<Point> = counts
            .iter()
            .map(|&n| {
                let base = Point {
                    n_b: 2,
                    d_re_frac: 1.25,
                    ..Point::preset(scheme)
                };
                match id {
                    FigureId::RelayAntennas => Point { n_r: n, ..base },
                    _ => Point { n_r: 3, n_e: n, ..base },
                }
            })
            .collect();
        optimize_chain(s, &pts, "joint")
    });
    let axis = |r: &Row| if id == FigureId::RelayAntennas { r.n_r as f64 } else { r.n_e as f64 };
    let series = Scheme::ALL
        .into_iter()
        .map(|scheme| {
            let sel: Vec<Row> = rows.iter().filter(|r| r.scheme == scheme).cloned().collect();
            Series {
                label: scheme.to_string(),
                points: curve(&sel, axis, |r| Some(r.feasible_see())),
                style: Style::Line,
                color: color(scheme),
            }
        })
        .collect();
    let (title, x_label) = if id == FigureId::RelayAntennas {
        ("Optimized SEE against relay antennas", "n_R")
    } else {
        ("Optimized SEE against eavesdropper antennas (n_R = 3)", "n_E")
    };
    Figure {
        id,
        rows,
        chart: Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: "SEE ((bps/Hz)/W)".into(),
            log_x: false,
            series,
        },
    }
}
