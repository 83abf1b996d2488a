use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use percup_core::cohomology::persistent_cohomology;
use percup_core::complex::{build_vr, FilteredComplex, Metric, MetricInput};
use percup_core::cup::{cup_length_diagram, invariant_from_diagram};
use percup_core::distances::{bottleneck, erosion};
use percup_core::flags::{lcup_barcode, phi_rank};
use percup_core::invariants::{mobius_invert, StepInvariant};
use percup_core::linalg::Field;
use percup_core::{fixtures, Error as CoreError};
use serde::Serialize;

use crate::io::{self, ParseError};
use crate::json::{self, BarJson, DiagramJson, InvariantJson, SignedDiagramJson};
use crate::svg;

/// Persistent cohomology, cup-length and flag-rank invariants of filtered
/// simplicial complexes.
#[derive(Parser, Debug)]
#[command(name = "percup", version, about)]
pub struct Cli {
    /// Characteristic of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    pub field: u32,
    /// Largest simplex dimension kept (default 2 for Vietoris–Rips input).
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Largest Vietoris–Rips scale.
    #[arg(long, global = true, default_value_t = f64::INFINITY)]
    pub max_scale: f64,
    /// Input format; inferred from the extension when omitted
    /// (`.json` invariant, `.csv` points, `.dist`/`.distmat` matrix,
    /// anything else an explicit filtration).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Metric for point clouds.
    #[arg(long, global = true, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG rendering here.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Points,
    Distmat,
    Filtration,
    InvariantJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    LInfinity,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Size of the filtered complex.
    Vr { input: PathBuf },
    /// Persistent cohomology bars with representative cocycles.
    Barcode { input: PathBuf },
    /// Persistent cup-length diagram.
    Cupdgm { input: PathBuf },
    /// Persistent cup-length invariant.
    Cuplength { input: PathBuf },
    /// Barcode of the persistent ℓ-cup module in one degree.
    Lcup {
        input: PathBuf,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        deg: usize,
    },
    /// Rank invariant of the persistent graded flag.
    Phirank {
        input: PathBuf,
        /// Largest product length (defaults to the top dimension).
        #[arg(long)]
        max_ell: Option<usize>,
    },
    /// Möbius inversion of a cup-length invariant.
    Mobius { input: PathBuf },
    /// Erosion distance between two invariants, or between the cup-length
    /// invariants of two complexes.
    Erosion {
        a: PathBuf,
        b: PathBuf,
        /// Also list the candidate thresholds that were searched.
        #[arg(long)]
        candidates: bool,
    },
    /// Bottleneck distance between barcodes (JSON or complexes), taking the
    /// maximum over degrees.
    Bottleneck { a: PathBuf, b: PathBuf },
    /// Recompute a built-in example.
    Repro {
        #[arg(value_enum)]
        fixture: Fixture,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    PinchedTorus,
    TwoDisk,
    TorusVsWedge,
    T2s3VsS1s2s1,
}

/// 2 for internal consistency failures, 1 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let consistency = e.chain().any(|c| {
        matches!(
            c.downcast_ref::<CoreError>(),
            Some(CoreError::Consistency(_))
        ) || matches!(
            c.downcast_ref::<ParseError>(),
            Some(ParseError::Core(CoreError::Consistency(_)))
        )
    });
    if consistency {
        2
    } else {
        1
    }
}

fn infer_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::InvariantJson,
        Some("csv") => Format::Points,
        Some("dist" | "distmat") => Format::Distmat,
        _ => Format::Filtration,
    }
}

impl Cli {
    fn format_of(&self, path: &Path) -> Format {
        self.format.unwrap_or_else(|| infer_format(path))
    }

    fn field(&self) -> Result<Field> {
        Field::new(self.field).with_context(|| format!("--field {}", self.field))
    }

    fn load_complex(&self, path: &Path) -> Result<FilteredComplex> {
        let text = io::read_to_string(path)?;
        let ctx = || path.display().to_string();
        let vr = |input: MetricInput| -> Result<FilteredComplex> {
            Ok(build_vr(&input, self.max_dim.unwrap_or(2), self.max_scale)?)
        };
        match self.format_of(path) {
            Format::Filtration => {
                let c = io::parse_filtration(&text).with_context(ctx)?;
                match self.max_dim {
                    Some(d) if c.max_dim().is_some_and(|top| top > d) => {
                        let pairs = c
                            .simplices()
                            .filter(|(s, _)| s.dim() <= d)
                            .map(|(s, t)| (s.clone(), t))
                            .collect();
                        Ok(FilteredComplex::from_explicit(pairs)?)
                    }
                    _ => Ok(c),
                }
            }
            Format::Distmat => vr(MetricInput::Distances(
                io::parse_distance_matrix(&text).with_context(ctx)?,
            )),
            Format::Points => {
                let coords = io::parse_points(&text).with_context(ctx)?;
                let metric = match self.metric {
                    MetricArg::Euclidean => Metric::Euclidean,
                    MetricArg::LInfinity => Metric::LInfinity,
                };
                vr(MetricInput::Points { coords, metric })
            }
            Format::InvariantJson => {
                bail!("{}: expected a complex, not an invariant", path.display())
            }
        }
    }

    fn load_invariant(&self, path: &Path) -> Result<StepInvariant> {
        if self.format_of(path) != Format::InvariantJson {
            let c = self.load_complex(path)?;
            let bc = persistent_cohomology(&c, self.field()?);
            return Ok(invariant_from_diagram(&cup_length_diagram(&bc)?));
        }
        let text = io::read_to_string(path)?;
        let j: InvariantJson = serde_json::from_str(&text)
            .with_context(|| format!("{}: malformed invariant JSON", path.display()))?;
        j.to_invariant()
            .map_err(|m| anyhow!("{}: {m}", path.display()))
    }

    fn load_bars(&self, path: &Path) -> Result<Vec<BarJson>> {
        if self.format_of(path) == Format::InvariantJson {
            let text = io::read_to_string(path)?;
            return serde_json::from_str(&text)
                .with_context(|| format!("{}: malformed barcode JSON", path.display()));
        }
        let c = self.load_complex(path)?;
        Ok(json::barcode_json(&persistent_cohomology(
            &c,
            self.field()?,
        )))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, v: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(v)?;
        s.push('\n');
        self.emit(&s)
    }

    fn emit_svg(&self, render: impl FnOnce() -> String) -> Result<()> {
        match &self.svg {
            Some(p) => {
                std::fs::write(p, render()).with_context(|| format!("writing {}", p.display()))
            }
            None => Ok(()),
        }
    }

    fn no_svg(&self) -> Result<()> {
        match &self.svg {
            Some(_) => bail!("--svg is not supported by this subcommand"),
            None => Ok(()),
        }
    }
}

#[derive(Serialize)]
struct Stats {
    simplices: usize,
    vertices: usize,
    by_dimension: Vec<usize>,
    critical_values: usize,
}

#[derive(Serialize)]
struct LCupJson {
    degree: usize,
    ell: usize,
    bars: Vec<BarJson>,
}

#[derive(Serialize)]
struct PinchedTorusReport {
    barcode: Vec<BarJson>,
    diagram: DiagramJson,
    cup_length: InvariantJson,
    lcup: Vec<LCupJson>,
}

#[derive(Serialize)]
struct TwoDiskReport {
    diagram: DiagramJson,
    mobius: SignedDiagramJson,
    mobius_at_1_1: i64,
}

fn decimal(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        format!("{v:.10}")
    }
}

fn bottleneck_by_degree(a: &[BarJson], b: &[BarJson]) -> f64 {
    let top = a.iter().chain(b).map(|x| x.degree).max();
    let Some(top) = top else { return 0.0 };
    (0..=top)
        .map(|p| {
            let pick = |v: &[BarJson]| {
                v.iter()
                    .filter(|x| x.degree == p)
                    .map(BarJson::interval)
                    .collect::<Vec<_>>()
            };
            bottleneck(&pick(a), &pick(b))
        })
        .fold(0.0, f64::max)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Vr { input } => {
            cli.no_svg()?;
            let c = cli.load_complex(input)?;
            let top = c.max_dim().map_or(0, |d| d + 1);
            cli.emit_json(&Stats {
                simplices: c.len(),
                vertices: c.vertex_count(),
                by_dimension: (0..top).map(|p| c.simplices_of_dim(p).len()).collect(),
                critical_values: c.grid().len(),
            })
        }
        Command::Barcode { input } => {
            cli.no_svg()?;
            let c = cli.load_complex(input)?;
            cli.emit_json(&json::barcode_json(&persistent_cohomology(
                &c,
                cli.field()?,
            )))
        }
        Command::Cupdgm { input } => {
            let c = cli.load_complex(input)?;
            let d = cup_length_diagram(&persistent_cohomology(&c, cli.field()?))?;
            cli.emit_json(&DiagramJson::from_diagram(&d))?;
            cli.emit_svg(|| svg::diagram_svg(&d))
        }
        Command::Cuplength { input } => {
            let inv = cli.load_invariant(input)?;
            cli.emit_json(&InvariantJson::from_invariant(&inv))?;
            cli.emit_svg(|| svg::invariant_svg(&inv))
        }
        Command::Lcup { input, ell, deg } => {
            cli.no_svg()?;
            let c = cli.load_complex(input)?;
            let lc = lcup_barcode(&persistent_cohomology(&c, cli.field()?), *ell, *deg)?;
            cli.emit_json(&json::lcup_json(&lc))
        }
        Command::Phirank { input, max_ell } => {
            let c = cli.load_complex(input)?;
            let rank = phi_rank(&persistent_cohomology(&c, cli.field()?), *max_ell)?;
            cli.emit_json(&InvariantJson::from_invariant(&rank))?;
            cli.emit_svg(|| svg::invariant_svg(&rank))
        }
        Command::Mobius { input } => {
            cli.no_svg()?;
            let inv = cli.load_invariant(input)?;
            cli.emit_json(&SignedDiagramJson::from_signed(&mobius_invert(&inv)))
        }
        Command::Erosion { a, b, candidates } => {
            cli.no_svg()?;
            let r = erosion(&cli.load_invariant(a)?, &cli.load_invariant(b)?)?;
            let mut text = decimal(r.value) + "\n";
            if *candidates {
                for c in &r.candidates {
                    text += &format!("candidate {}\n", decimal(*c));
                }
            }
            cli.emit(&text)
        }
        Command::Bottleneck { a, b } => {
            cli.no_svg()?;
            let d = bottleneck_by_degree(&cli.load_bars(a)?, &cli.load_bars(b)?);
            cli.emit(&(decimal(d) + "\n"))
        }
        Command::Repro { fixture } => repro(cli, *fixture),
    }
}

fn repro(cli: &Cli, fixture: Fixture) -> Result<()> {
    let field = cli.field()?;
    match fixture {
        Fixture::PinchedTorus => {
            let c = fixtures::pinched_torus();
            let bc = persistent_cohomology(&c, field);
            let d = cup_length_diagram(&bc)?;
            let inv = invariant_from_diagram(&d);
            let mut lcup = Vec::new();
            for ell in 1..=2 {
                for degree in 1..=2 {
                    lcup.push(LCupJson {
                        degree,
                        ell,
                        bars: json::lcup_json(&lcup_barcode(&bc, ell, degree)?),
                    });
                }
            }
            cli.emit_json(&PinchedTorusReport {
                barcode: json::barcode_json(&bc),
                diagram: DiagramJson::from_diagram(&d),
                cup_length: InvariantJson::from_invariant(&inv),
                lcup,
            })?;
            cli.emit_svg(|| svg::invariant_svg(&inv))
        }
        Fixture::TwoDisk => {
            let c = fixtures::two_disks();
            let d = cup_length_diagram(&persistent_cohomology(&c, field))?;
            let inv = invariant_from_diagram(&d);
            let mobius = mobius_invert(&inv);
            cli.emit_json(&TwoDiskReport {
                diagram: DiagramJson::from_diagram(&d),
                mobius_at_1_1: mobius.at(1.0, 1.0)[0],
                mobius: SignedDiagramJson::from_signed(&mobius),
            })?;
            cli.emit_svg(|| svg::invariant_svg(&inv))
        }
        Fixture::TorusVsWedge => {
            cli.no_svg()?;
            let r = erosion(&fixtures::vr_torus_cup(), &fixtures::vr_wedge_cup())?;
            cli.emit(&(decimal(r.value) + "\n"))
        }
        Fixture::T2s3VsS1s2s1 => {
            cli.no_svg()?;
            let r = erosion(
                &fixtures::vr_torus_wedge_sphere3_rank(),
                &fixtures::vr_s1s2_wedge_s1_rank(),
            )?;
            cli.emit(&(decimal(r.value) + "\n"))
        }
    }
}
