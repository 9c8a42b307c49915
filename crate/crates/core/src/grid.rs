//! The 12-TET triad space: every chord of a root plus two upper voices at
//! `i` and `j` semitones, analyzed cell by cell.
//!
//! Only the triangle `1 <= i < j <= j_max` is emitted; the other half of
//! the square is the mirror image of this one. Cells whose tempered
//! frequencies admit no small-integer proportion at the configured
//! tolerance stay unclassified.

use std::fmt;

use crate::affect::{emotional_power, PowerReport};
use crate::consonance::chord_consonant;
use crate::proportion::Proportion;
use crate::rationalize::{rationalize, semitones_to_freqs, RationalizeConfig, RationalizeError};

/// Default root: middle C. Classification is scale-invariant, so the root
/// only matters when cells are rendered as audio.
pub const DEFAULT_ROOT_HZ: f64 = 261.63;

/// Widest sweep supported.
pub const MAX_SPAN_SEMITONES: u8 = 24;

/// Errors from grid generation.
#[derive(Clone, PartialEq, Debug)]
pub enum GridError {
    /// `j_max` outside 2..=24.
    BadSpan(u8),
    /// Invalid root or search configuration.
    Config(RationalizeError),
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::BadSpan(j) => {
                write!(f, "grid span must lie in 2..={MAX_SPAN_SEMITONES}, got {j}")
            }
            GridError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for GridError {}

impl From<RationalizeError> for GridError {
    fn from(e: RationalizeError) -> Self {
        GridError::Config(e)
    }
}

/// Analysis of one resolved cell.
#[derive(Clone, Debug)]
pub struct CellAnalysis {
    pub proportion: Proportion,
    pub report: PowerReport,
    pub consonant: bool,
}

/// One (lower-interval, upper-interval) cell of the triad space.
#[derive(Clone, Debug)]
pub struct GridCell {
    pub lower_semitones: u8,
    pub upper_semitones: u8,
    /// `None` when rationalization found nothing within tolerance.
    pub resolution: Option<CellAnalysis>,
}

/// Output encodings for a generated grid.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum GridFormat {
    /// One row per cell.
    Csv,
    /// Plain portable pixmap, one pixel per cell.
    Image,
}

/// The search configuration the triad space is generated with by default:
/// 2% tolerance, because stacked tempered thirds land up to ~1.6% away
/// from their just proportions, and a term ceiling of 128 so that the
/// mirror of every winning proportion stays representable.
pub fn default_grid_config() -> RationalizeConfig {
    RationalizeConfig::new(0.02, 128, 8).expect("grid defaults are valid")
}

/// Sweep the triangle `1 <= i < j <= j_max` and analyze every cell.
///
/// Cells are evaluated independently and returned ordered by `(i, j)`.
pub fn generate_grid(
    j_max: u8,
    root: f64,
    cfg: &RationalizeConfig,
) -> Result<Vec<GridCell>, GridError> {
    if !(2..=MAX_SPAN_SEMITONES).contains(&j_max) {
        return Err(GridError::BadSpan(j_max));
    }
    let mut cells = Vec::new();
    for i in 1..j_max {
        for j in (i + 1)..=j_max {
            let freqs = semitones_to_freqs(&[0.0, i as f64, j as f64], root)?;
            let resolution = match rationalize(&freqs, cfg) {
                Ok(proportion) => {
                    let report = emotional_power(&proportion);
                    let consonant = chord_consonant(&proportion).0;
                    Some(CellAnalysis {
                        proportion,
                        report,
                        consonant,
                    })
                }
                Err(RationalizeError::NoProportionFound) => None,
                Err(other) => return Err(other.into()),
            };
            cells.push(GridCell {
                lower_semitones: i,
                upper_semitones: j,
                resolution,
            });
        }
    }
    Ok(cells)
}

/// Serialize a grid as CSV or as a plain pixmap.
pub fn emit_grid(cells: &[GridCell], format: GridFormat) -> Vec<u8> {
    match format {
        GridFormat::Csv => emit_csv(cells),
        GridFormat::Image => emit_ppm(cells),
    }
}

fn emit_csv(cells: &[GridCell]) -> Vec<u8> {
    let mut out = String::from(
        "i,j,proportion,class,pwe_main,pwe_side,pwe_adjusted,near_symmetric,consonant\n",
    );
    for cell in cells {
        match &cell.resolution {
            Some(a) => {
                let r = &a.report;
                out.push_str(&format!(
                    "{},{},{},{},{:.6},{:.6},{:.6},{},{}\n",
                    cell.lower_semitones,
                    cell.upper_semitones,
                    a.proportion,
                    r.classification,
                    r.pwe_main,
                    r.pwe_side,
                    r.pwe_adjusted,
                    r.near_symmetric,
                    a.consonant,
                ));
            }
            None => {
                out.push_str(&format!(
                    "{},{},,unclassified,,,,,\n",
                    cell.lower_semitones, cell.upper_semitones
                ));
            }
        }
    }
    out.into_bytes()
}

/// Color of one cell: red for major, blue for minor, gray for symmetric or
/// nearly symmetric, white for unclassified. The channel intensity scales
/// with the adjusted power amplitude, clamped at 3.0.
fn cell_color(cell: &GridCell) -> [u8; 3] {
    use crate::affect::Classification::*;
    match &cell.resolution {
        None => [255, 255, 255],
        Some(a) => {
            let amplitude = a.report.pwe_adjusted.abs().min(3.0);
            let v = (255.0 * amplitude / 3.0).round() as u8;
            if a.report.near_symmetric || a.report.classification == Symmetric {
                [v, v, v]
            } else if a.report.classification == Major {
                [v, 0, 0]
            } else {
                [0, 0, v]
            }
        }
    }
}

fn emit_ppm(cells: &[GridCell]) -> Vec<u8> {
    let j_max = cells
        .iter()
        .map(|c| c.upper_semitones)
        .max()
        .unwrap_or(0) as usize;
    let mut pixels = vec![[255u8, 255, 255]; j_max * j_max];
    for cell in cells {
        // Bottom row is i = 1; columns follow j.
        let x = cell.upper_semitones as usize - 1;
        let y = j_max - cell.lower_semitones as usize;
        pixels[y * j_max + x] = cell_color(cell);
    }
    let mut out = format!("P3\n{j_max} {j_max}\n255\n");
    for row in pixels.chunks(j_max) {
        let line: Vec<String> = row
            .iter()
            .map(|p| format!("{} {} {}", p[0], p[1], p[2]))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}
