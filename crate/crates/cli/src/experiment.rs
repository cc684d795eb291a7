//! Experiment orchestration: evolve once, measure many regions in parallel,
//! and write traceable CSV/SVG artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ecalab_core::analysis::{
    detect_drops, moving_average, region_phrase_count, section_boundaries,
};
use ecalab_core::{step, ComplexitySeries, Configuration, Region, RuleTable};
use rayon::prelude::*;

use crate::csv::{format_value, write_series_csv};
use crate::error::CliError;
use crate::formats::load_cfg;
use crate::svg::{render_line_chart, PlotSeries};

/// Where the starting configuration comes from.
#[derive(Debug, Clone)]
pub enum InitialSource {
    Random { width: usize, density: f64, seed: u64 },
    File(PathBuf),
}

impl InitialSource {
    pub fn resolve(&self) -> Result<Configuration, CliError> {
        match self {
            InitialSource::Random {
                width,
                density,
                seed,
            } => {
                if *width == 0 {
                    return Err(CliError::Usage("--width must be at least 1".into()));
                }
                Ok(Configuration::random(*width, *density, *seed))
            }
            InitialSource::File(path) => load_cfg(path),
        }
    }

    fn describe(&self) -> String {
        match self {
            InitialSource::Random {
                width,
                density,
                seed,
            } => format!("random width={width} density={density} seed={seed}"),
            InitialSource::File(path) => format!("file={}", path.display()),
        }
    }
}

/// Which parts of the row get their own complexity series.
#[derive(Debug, Clone)]
pub enum AnalysisScope {
    Whole,
    Sections(usize),
    Regions(Vec<Region>),
}

impl AnalysisScope {
    /// Column names and the region of each series (`None` = whole row).
    pub fn columns(&self, width: usize) -> Result<(Vec<String>, Vec<Option<Region>>), CliError> {
        match self {
            AnalysisScope::Whole => Ok((vec!["value".into()], vec![None])),
            AnalysisScope::Sections(n) => {
                let regions = section_boundaries(width, *n)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok((
                    (0..*n).map(|i| format!("section_{i}")).collect(),
                    regions.into_iter().map(Some).collect(),
                ))
            }
            AnalysisScope::Regions(regions) => {
                if regions.is_empty() {
                    return Err(CliError::Usage("no regions given".into()));
                }
                let names = if regions.len() == 1 {
                    vec!["value".into()]
                } else {
                    (0..regions.len()).map(|i| format!("region_{i}")).collect()
                };
                Ok((names, regions.iter().copied().map(Some).collect()))
            }
        }
    }
}

/// A full experiment description; every artifact embeds it as comments.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub rule: u8,
    pub initial: InitialSource,
    pub steps: u64,
    pub stride: u64,
    pub scope: AnalysisScope,
    pub smoothing: Option<usize>,
    pub from: Option<u64>,
    pub to: Option<u64>,
    pub no_timestamp: bool,
}

impl ExperimentSpec {
    pub fn meta_lines(&self, command: &str, width: usize) -> Vec<String> {
        let mut lines = vec![
            format!("tool: ecalab {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            format!("rule: {}", self.rule),
            format!("width: {width}"),
            format!("initial: {}", self.initial.describe()),
            format!("steps: {}", self.steps),
            format!("stride: {}", self.stride),
        ];
        match &self.scope {
            AnalysisScope::Whole => lines.push("analysis: whole".into()),
            AnalysisScope::Sections(n) => lines.push(format!("analysis: sections n={n}")),
            AnalysisScope::Regions(regions) => {
                let list: Vec<String> = regions.iter().map(|r| r.to_string()).collect();
                lines.push(format!("analysis: regions {}", list.join(",")));
            }
        }
        if let Some(period) = self.smoothing {
            lines.push(format!("smoothing_period: {period}"));
        }
        if let Some(from) = self.from {
            lines.push(format!("from: {from}"));
        }
        if let Some(to) = self.to {
            lines.push(format!("to: {to}"));
        }
        append_timestamp(&mut lines, self.no_timestamp);
        lines
    }
}

pub fn append_timestamp(lines: &mut Vec<String>, no_timestamp: bool) {
    if !no_timestamp {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        lines.push(format!("generated_at_unix: {now}"));
    }
}

const ROW_CHUNK: usize = 256;

/// Evolves `initial` for `steps` steps and returns one complexity series per
/// requested region (`None` = whole row), recording every `stride`-th row.
///
/// Rows are processed in bounded chunks and each chunk's complexities are
/// computed in parallel, so arbitrarily long runs use constant memory. The
/// values are identical to evolving a full recording and calling
/// `complexity_series` on it.
pub fn evolve_series(
    initial: &Configuration,
    rule: &RuleTable,
    steps: u64,
    stride: u64,
    regions: &[Option<Region>],
) -> Result<Vec<ComplexitySeries>, CliError> {
    if stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    for region in regions.iter().flatten() {
        region
            .validate(initial.width())
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let recorded = steps / stride;
    let mut values: Vec<Vec<f64>> = vec![Vec::with_capacity(recorded as usize + 1); regions.len()];
    let mut buffer: Vec<Configuration> = Vec::with_capacity(ROW_CHUNK);
    buffer.push(initial.clone());
    let mut current = initial.clone();
    let mut remaining = recorded;
    loop {
        while buffer.len() < ROW_CHUNK && remaining > 0 {
            for _ in 0..stride {
                current = step(&current, rule).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            buffer.push(current.clone());
            remaining -= 1;
        }
        let counts: Vec<Vec<f64>> = buffer
            .par_iter()
            .map(|row| {
                regions
                    .iter()
                    .map(|region| {
                        region_phrase_count(row, *region).expect("regions validated") as f64
                    })
                    .collect()
            })
            .collect();
        for row_counts in counts {
            for (column, value) in values.iter_mut().zip(row_counts) {
                column.push(value);
            }
        }
        buffer.clear();
        if remaining == 0 {
            break;
        }
    }
    Ok(values
        .into_iter()
        .zip(regions)
        .map(|(vals, region)| ComplexitySeries::new(0, stride, vals, *region))
        .collect())
}

/// Tracks written artifacts so a failing run leaves nothing behind.
#[derive(Default)]
pub struct ArtifactWriter {
    created: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn write(&mut self, path: &Path, content: &str) -> Result<(), CliError> {
        fs::write(path, content)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
        self.created.push(path.to_path_buf());
        Ok(())
    }

    pub fn paths(&self) -> &[PathBuf] {
        &self.created
    }

    fn remove_all(&self) {
        for path in &self.created {
            let _ = fs::remove_file(path);
        }
    }
}

/// Runs `f` with an [`ArtifactWriter`]; on failure every file it wrote is
/// removed before the error propagates.
pub fn with_artifacts<T>(
    f: impl FnOnce(&mut ArtifactWriter) -> Result<T, CliError>,
) -> Result<T, CliError> {
    let mut writer = ArtifactWriter::default();
    match f(&mut writer) {
        Ok(value) => Ok(value),
        Err(error) => {
            writer.remove_all();
            Err(error)
        }
    }
}

fn to_plot_series(names: &[String], series: &[ComplexitySeries]) -> Vec<PlotSeries> {
    names
        .iter()
        .zip(series)
        .map(|(name, s)| PlotSeries {
            name: name.clone(),
            points: s
                .values()
                .iter()
                .enumerate()
                .map(|(i, &v)| (s.step_at(i) as f64, v))
                .collect(),
        })
        .collect()
}

/// Extra outputs of the `analyze` command.
#[derive(Debug, Clone, Default)]
pub struct AnalyzeOutputs {
    /// CSV path; `None` prints to stdout.
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub drops: Option<DropRequest>,
}

#[derive(Debug, Clone)]
pub struct DropRequest {
    pub out: PathBuf,
    pub window: usize,
    pub min_drop: f64,
}

/// The `analyze` pipeline: evolve, measure, smooth, slice, emit.
///
/// Returns the CSV text when it was sent to stdout.
pub fn run_analysis(
    spec: &ExperimentSpec,
    outputs: &AnalyzeOutputs,
) -> Result<Option<String>, CliError> {
    let initial = spec.initial.resolve()?;
    let rule = RuleTable::new(spec.rule);
    let (names, regions) = spec.scope.columns(initial.width())?;
    let raw = evolve_series(&initial, &rule, spec.steps, spec.stride, &regions)?;

    let mut series = raw.clone();
    if let Some(period) = spec.smoothing {
        series = series
            .iter()
            .map(|s| moving_average(s, period).map_err(|e| CliError::Usage(e.to_string())))
            .collect::<Result<_, _>>()?;
    }
    if spec.from.is_some() || spec.to.is_some() {
        series = series
            .iter()
            .map(|s| s.slice_steps(spec.from, spec.to))
            .collect();
    }

    let meta = spec.meta_lines("analyze", initial.width());
    let refs: Vec<&ComplexitySeries> = series.iter().collect();
    let csv_text = write_series_csv(&meta, &names, &refs)?;

    with_artifacts(|writer| {
        let mut stdout_payload = None;
        match &outputs.csv {
            Some(path) => writer.write(path, &csv_text)?,
            None => stdout_payload = Some(csv_text.clone()),
        }
        if let Some(path) = &outputs.svg {
            let title = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "ecalab analyze".into());
            let chart = render_line_chart(
                &title,
                "step",
                "LZ complexity",
                &to_plot_series(&names, &series),
                &meta,
            )?;
            writer.write(path, &chart)?;
        }
        if let Some(request) = &outputs.drops {
            if raw.len() != 1 {
                return Err(CliError::Usage(
                    "drop detection needs a single series; use the whole row or one region".into(),
                ));
            }
            let events = detect_drops(&raw[0], request.window, request.min_drop)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let mut text = String::new();
            for line in &meta {
                text.push_str("# ");
                text.push_str(line);
                text.push('\n');
            }
            text.push_str(&format!(
                "# drop_window: {} min_drop: {}\n",
                request.window, request.min_drop
            ));
            text.push_str("step,magnitude\n");
            for event in &events {
                text.push_str(&format!(
                    "{},{}\n",
                    event.step,
                    format_value(event.magnitude)
                ));
            }
            writer.write(&request.out, &text)?;
        }
        Ok(stdout_payload)
    })
}

/// Inputs of the full reproduction pipeline.
#[derive(Debug, Clone)]
pub struct ReproduceSpec {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub rule: u8,
    pub steps: u64,
    pub period: usize,
    pub sections: usize,
    pub parts: Vec<Region>,
    pub part_from: u64,
    pub part_to: u64,
    pub no_timestamp: bool,
}

/// Runs the whole pipeline on a prepared initial configuration: the raw
/// whole-row series, its smoothed version, every section's series, and the
/// smoothed focus-window series over the requested step range. Each artifact
/// is written as CSV and SVG into `out_dir`.
pub fn run_reproduce(spec: &ReproduceSpec) -> Result<Vec<PathBuf>, CliError> {
    let initial = load_cfg(&spec.config)?;
    let width = initial.width();
    let rule = RuleTable::new(spec.rule);

    let section_regions =
        section_boundaries(width, spec.sections).map_err(|e| CliError::Usage(e.to_string()))?;
    for part in &spec.parts {
        part.validate(width).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    if spec.part_from > spec.part_to {
        return Err(CliError::Usage(
            "--part-from must not exceed --part-to".into(),
        ));
    }

    let mut regions: Vec<Option<Region>> = vec![None];
    regions.extend(section_regions.iter().copied().map(Some));
    regions.extend(spec.parts.iter().copied().map(Some));

    let all = evolve_series(&initial, &rule, spec.steps, 1, &regions)?;
    let whole = &all[0];
    let sections = &all[1..1 + spec.sections];
    let parts = &all[1 + spec.sections..];

    let mut meta = vec![
        format!("tool: ecalab {}", env!("CARGO_PKG_VERSION")),
        "command: reproduce-paper".to_string(),
        format!("rule: {}", spec.rule),
        format!("width: {width}"),
        format!("initial: file={}", spec.config.display()),
        format!("steps: {}", spec.steps),
        "stride: 1".to_string(),
        format!("sections: {}", spec.sections),
        format!("smoothing_period: {}", spec.period),
        format!(
            "parts: {}",
            spec.parts
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        format!("part_range: {}..{}", spec.part_from, spec.part_to),
    ];
    append_timestamp(&mut meta, spec.no_timestamp);

    fs::create_dir_all(&spec.out_dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", spec.out_dir.display())))?;

    let smooth = |series: &ComplexitySeries| {
        moving_average(series, spec.period).map_err(|e| CliError::Usage(e.to_string()))
    };

    with_artifacts(|writer| {
        let emit = |writer: &mut ArtifactWriter,
                        stem: &str,
                        names: &[String],
                        series: &[ComplexitySeries]|
         -> Result<(), CliError> {
            let refs: Vec<&ComplexitySeries> = series.iter().collect();
            let csv_path = spec.out_dir.join(format!("{stem}.csv"));
            writer.write(&csv_path, &write_series_csv(&meta, names, &refs)?)?;
            let chart = render_line_chart(
                stem,
                "step",
                "LZ complexity",
                &to_plot_series(names, series),
                &meta,
            )?;
            writer.write(&spec.out_dir.join(format!("{stem}.svg")), &chart)?;
            Ok(())
        };

        emit(
            writer,
            "whole_row",
            &["value".into()],
            std::slice::from_ref(whole),
        )?;
        emit(
            writer,
            "whole_row_smoothed",
            &["value".into()],
            &[smooth(whole)?],
        )?;
        let section_names: Vec<String> =
            (0..spec.sections).map(|i| format!("section_{i}")).collect();
        emit(writer, "sections", &section_names, sections)?;
        for (region, series) in spec.parts.iter().zip(parts) {
            let windowed =
                smooth(series)?.slice_steps(Some(spec.part_from), Some(spec.part_to));
            emit(
                writer,
                &format!("window_x{}", region.start_x),
                &["value".into()],
                &[windowed],
            )?;
        }
        Ok(writer.paths().to_vec())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ecalab_core::analysis::complexity_series;
    use ecalab_core::evolve;

    #[test]
    fn chunked_parallel_series_match_the_sequential_path() {
        let initial = Configuration::random(300, 0.5, 9);
        let rule = RuleTable::new(110);
        let regions = [None, Some(Region::new(10, 64)), Some(Region::new(200, 0))];

        let fast = evolve_series(&initial, &rule, 40, 3, &regions).unwrap();
        let recording = evolve(&initial, &rule, 40, 3).unwrap();
        for (series, region) in fast.iter().zip(regions) {
            let reference = complexity_series(&recording, region).unwrap();
            assert_eq!(series, &reference);
        }
    }

    #[test]
    fn oversized_regions_are_usage_errors() {
        let initial = Configuration::random(100, 0.5, 0);
        let rule = RuleTable::new(110);
        let err = evolve_series(&initial, &rule, 5, 1, &[Some(Region::new(90, 20))]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn failed_runs_remove_their_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let kept = dir.path().join("kept.txt");
        let result: Result<(), CliError> = with_artifacts(|writer| {
            writer.write(&kept, "partial")?;
            Err(CliError::Data("boom".into()))
        });
        assert!(result.is_err());
        assert!(!kept.exists());
    }
}
