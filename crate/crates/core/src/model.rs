//! Domain types shared by every other module: tasks, taxonomy, evaluation
//! data, and analysis configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, TaskSetViolation};
use crate::scalar::Scalar;

/// Perceptual level of a task: how early in the visual hierarchy it sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerceptualLevel {
    Low,
    Mid,
    High,
}

impl PerceptualLevel {
    pub const ALL: [PerceptualLevel; 3] = [Self::Low, Self::Mid, Self::High];

    pub fn label(self) -> &'static str {
        match self {
            Self::Low => "low",
            Self::Mid => "mid",
            Self::High => "high",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" | "low-level" => Some(Self::Low),
            "mid" | "mid-level" => Some(Self::Mid),
            "high" | "high-level" => Some(Self::High),
            _ => None,
        }
    }
}

/// Spatial granularity of a task: the unit of image content it reasons over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Pixel,
    Crop,
    Image,
}

impl Granularity {
    pub const ALL: [Granularity; 3] = [Self::Pixel, Self::Crop, Self::Image];

    pub fn label(self) -> &'static str {
        match self {
            Self::Pixel => "pixel",
            Self::Crop => "crop",
            Self::Image => "image",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pixel" | "pixel-level" => Some(Self::Pixel),
            "crop" | "crop-level" => Some(Self::Crop),
            "image" | "image-level" => Some(Self::Image),
            _ => None,
        }
    }
}

/// One task: identity plus its two-axis classification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub id: String,
    pub abbreviation: String,
    pub perceptual_level: PerceptualLevel,
    pub granularity: Granularity,
}

impl TaskSpec {
    pub fn new(
        id: impl Into<String>,
        abbreviation: impl Into<String>,
        perceptual_level: PerceptualLevel,
        granularity: Granularity,
    ) -> Self {
        Self {
            id: id.into(),
            abbreviation: abbreviation.into(),
            perceptual_level,
            granularity,
        }
    }
}

/// An ordered, validated set of tasks. The ordering is the canonical index
/// space for every matrix in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct TaskSet {
    tasks: Vec<TaskSpec>,
    #[serde(skip)]
    by_id: BTreeMap<String, usize>,
    #[serde(skip)]
    by_abbrev: BTreeMap<String, usize>,
}

impl TaskSet {
    /// Validate a task list and freeze it into a canonical set.
    ///
    /// Every violation is reported, not just the first: duplicate ids,
    /// duplicate or empty abbreviations, and fewer than two tasks.
    pub fn new(tasks: Vec<TaskSpec>) -> Result<Self> {
        let mut violations = Vec::new();
        if tasks.is_empty() {
            violations.push(TaskSetViolation::EmptyTaskList);
        } else if tasks.len() < 2 {
            violations.push(TaskSetViolation::TooFewTasks(tasks.len()));
        }
        let mut by_id = BTreeMap::new();
        let mut by_abbrev = BTreeMap::new();
        for (idx, task) in tasks.iter().enumerate() {
            if by_id.insert(task.id.clone(), idx).is_some() {
                violations.push(TaskSetViolation::DuplicateTaskId(task.id.clone()));
            }
            if task.abbreviation.is_empty() {
                violations.push(TaskSetViolation::EmptyAbbreviation(task.id.clone()));
            } else if by_abbrev.insert(task.abbreviation.clone(), idx).is_some() {
                violations.push(TaskSetViolation::DuplicateAbbreviation(
                    task.abbreviation.clone(),
                ));
            }
        }
        if violations.is_empty() {
            Ok(Self {
                tasks,
                by_id,
                by_abbrev,
            })
        } else {
            Err(Error::InvalidTaskSet(violations))
        }
    }

    /// Number of tasks N.
    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    pub fn tasks(&self) -> &[TaskSpec] {
        &self.tasks
    }

    pub fn task(&self, index: usize) -> &TaskSpec {
        &self.tasks[index]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.by_id.get(id).copied()
    }

    /// Resolve a task by id, falling back to abbreviation. Convenient for
    /// config files where abbreviations read better.
    pub fn resolve(&self, key: &str) -> Option<usize> {
        self.index_of(key)
            .or_else(|| self.by_abbrev.get(key).copied())
    }

    pub fn id(&self, index: usize) -> &str {
        &self.tasks[index].id
    }

    pub fn abbreviation(&self, index: usize) -> &str {
        &self.tasks[index].abbreviation
    }

    /// The 13 perception tasks of the BLINK benchmark with their
    /// perceptual-level and granularity classification. Used as the default
    /// task set when no task file is supplied.
    pub fn blink() -> Self {
        use Granularity as G;
        use PerceptualLevel as P;
        let tasks = vec![
            TaskSpec::new("art_style", "AS", P::Mid, G::Image),
            TaskSpec::new("counting", "CN", P::High, G::Image),
            TaskSpec::new("forensic_detection", "FD", P::High, G::Image),
            TaskSpec::new("functional_correspondence", "FC", P::High, G::Pixel),
            TaskSpec::new("jigsaw", "JG", P::Mid, G::Crop),
            TaskSpec::new("multi_view_reasoning", "MR", P::Mid, G::Image),
            TaskSpec::new("object_localization", "OL", P::High, G::Crop),
            TaskSpec::new("relative_depth", "RD", P::Low, G::Pixel),
            TaskSpec::new("relative_reflectance", "RR", P::Low, G::Pixel),
            TaskSpec::new("semantic_correspondence", "SC", P::High, G::Pixel),
            TaskSpec::new("spatial_reasoning", "SR", P::Mid, G::Image),
            TaskSpec::new("visual_correspondence", "VC", P::Low, G::Pixel),
            TaskSpec::new("visual_similarity", "VS", P::High, G::Image),
        ];
        Self::new(tasks).expect("builtin task set is valid")
    }
}

impl<'de> Deserialize<'de> for TaskSet {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let tasks = Vec::<TaskSpec>::deserialize(deserializer)?;
        TaskSet::new(tasks).map_err(serde::de::Error::custom)
    }
}

/// Validate a task list into a canonical [`TaskSet`].
pub fn validate_task_set(tasks: Vec<TaskSpec>) -> Result<TaskSet> {
    TaskSet::new(tasks)
}

/// Where a measurement comes from: the base model, or the model finetuned
/// on one source task.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Baseline,
    Task(String),
}

/// Sentinel used for baseline rows in record files; case-sensitive.
pub const BASELINE_SENTINEL: &str = "BASELINE";

impl Source {
    pub fn as_str(&self) -> &str {
        match self {
            Self::Baseline => BASELINE_SENTINEL,
            Self::Task(id) => id,
        }
    }

    pub fn from_field(field: &str) -> Self {
        if field == BASELINE_SENTINEL {
            Self::Baseline
        } else {
            Self::Task(field.to_string())
        }
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Source {
    fn serialize<Se>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error>
    where
        Se: serde::Serializer,
    {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Source {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let s = String::deserialize(deserializer)?;
        Ok(Self::from_field(&s))
    }
}

/// One evaluation measurement: accuracy (percent) of a (base or finetuned)
/// model on a target task, with the target's question count `m`.
///
/// `num_questions = 0` is the sentinel for "unknown"; it disables the
/// accuracy-grid check and the analytic lower-bound report for that task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord<S> {
    pub model_id: String,
    pub seed: i64,
    pub source: Source,
    pub target: String,
    pub accuracy: S,
    pub num_questions: u32,
}

/// A non-fatal data-quality observation raised during assembly.
#[derive(Debug, Clone, PartialEq)]
pub enum IngestWarning {
    /// Accuracy is not a multiple of `100 / m` for the target's question
    /// count. Upstream harnesses that average sub-metrics produce such
    /// values legitimately, so this never rejects the record.
    OffGridAccuracy {
        model_id: String,
        seed: i64,
        source: String,
        target: String,
        accuracy: f64,
        num_questions: u32,
    },
}

impl std::fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::OffGridAccuracy {
                model_id,
                seed,
                source,
                target,
                accuracy,
                num_questions,
            } => write!(
                f,
                "model {model_id:?} seed {seed}: accuracy {accuracy} for ({source} -> {target}) \
                 is not a multiple of 100/{num_questions}"
            ),
        }
    }
}

/// Fully populated accuracy data for one (model, seed) pair: a baseline
/// vector plus the N x N finetuned matrix, rows indexed by source task and
/// columns by target task in canonical [`TaskSet`] order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccuracyMatrix<S> {
    pub model_id: String,
    pub seed: i64,
    pub baseline: Vec<S>,
    pub finetuned: Vec<Vec<S>>,
    pub questions: Vec<u32>,
}

impl<S: Scalar> AccuracyMatrix<S> {
    pub fn n_tasks(&self) -> usize {
        self.baseline.len()
    }
}

/// Result of assembling a batch of records: one matrix per (model, seed)
/// group plus any data-quality warnings.
#[derive(Debug, Clone)]
pub struct Assembly<S> {
    pub matrices: Vec<AccuracyMatrix<S>>,
    pub warnings: Vec<IngestWarning>,
}

fn percent_in_range<S: Scalar>(value: S) -> bool {
    value >= S::zero() && value <= S::from_f64_lossy(100.0)
}

fn on_grid(accuracy: f64, m: u32) -> bool {
    if m == 0 {
        return true;
    }
    let scaled = accuracy * f64::from(m) / 100.0;
    (scaled - scaled.round()).abs() <= 1e-6
}

/// Assemble every (model, seed) group found in `records` into a fully
/// populated [`AccuracyMatrix`]. Missing cells, duplicate cells, unknown
/// task ids, out-of-range accuracies, and conflicting question counts are
/// hard errors; off-grid accuracies are warnings.
///
/// Record order never matters: groups and cells are keyed, and the output
/// is sorted by (model_id, seed).
pub fn assemble_matrices<S: Scalar>(
    records: &[EvalRecord<S>],
    task_set: &TaskSet,
) -> Result<Assembly<S>> {
    let n = task_set.len();
    let mut groups: BTreeMap<(String, i64), Group<S>> = BTreeMap::new();
    let mut warnings = Vec::new();

    for record in records {
        let target_idx = task_set
            .index_of(&record.target)
            .ok_or_else(|| Error::UnknownTaskId(record.target.clone()))?;
        let source_idx = match &record.source {
            Source::Baseline => None,
            Source::Task(id) => Some(
                task_set
                    .index_of(id)
                    .ok_or_else(|| Error::UnknownTaskId(id.clone()))?,
            ),
        };
        if !percent_in_range(record.accuracy) {
            return Err(Error::AccuracyOutOfBounds {
                source_task: record.source.to_string(),
                target: record.target.clone(),
                value: record.accuracy.to_f64().unwrap_or(f64::NAN),
            });
        }

        let group = groups
            .entry((record.model_id.clone(), record.seed))
            .or_insert_with(|| Group::new(n));

        let cell = match source_idx {
            None => &mut group.baseline[target_idx],
            Some(i) => &mut group.finetuned[i][target_idx],
        };
        if cell.is_some() {
            return Err(Error::DuplicateCell {
                model_id: record.model_id.clone(),
                seed: record.seed,
                source_task: record.source.to_string(),
                target: record.target.clone(),
            });
        }
        *cell = Some(record.accuracy);

        match group.questions[target_idx] {
            None => group.questions[target_idx] = Some(record.num_questions),
            Some(existing) if existing != record.num_questions => {
                return Err(Error::InconsistentQuestionCount {
                    target: record.target.clone(),
                    first: existing,
                    second: record.num_questions,
                })
            }
            Some(_) => {}
        }

        let acc = record.accuracy.to_f64().unwrap_or(f64::NAN);
        if !on_grid(acc, record.num_questions) {
            warnings.push(IngestWarning::OffGridAccuracy {
                model_id: record.model_id.clone(),
                seed: record.seed,
                source: record.source.to_string(),
                target: record.target.clone(),
                accuracy: acc,
                num_questions: record.num_questions,
            });
        }
    }

    if groups.is_empty() {
        return Err(Error::EmptyInput("no records to assemble"));
    }

    let mut matrices = Vec::with_capacity(groups.len());
    for ((model_id, seed), group) in groups {
        matrices.push(group.finish(model_id, seed, task_set)?);
    }
    Ok(Assembly { matrices, warnings })
}

struct Group<S> {
    baseline: Vec<Option<S>>,
    finetuned: Vec<Vec<Option<S>>>,
    questions: Vec<Option<u32>>,
}

impl<S: Scalar> Group<S> {
    fn new(n: usize) -> Self {
        Self {
            baseline: vec![None; n],
            finetuned: vec![vec![None; n]; n],
            questions: vec![None; n],
        }
    }

    fn finish(self, model_id: String, seed: i64, task_set: &TaskSet) -> Result<AccuracyMatrix<S>> {
        let n = task_set.len();
        let mut missing = Vec::new();
        for j in 0..n {
            if self.baseline[j].is_none() {
                missing.push((BASELINE_SENTINEL.to_string(), task_set.id(j).to_string()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.finetuned[i][j].is_none() {
                    missing.push((task_set.id(i).to_string(), task_set.id(j).to_string()));
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingCell {
                model_id,
                seed,
                cells: missing,
            });
        }
        Ok(AccuracyMatrix {
            model_id,
            seed,
            baseline: self.baseline.into_iter().map(|c| c.unwrap()).collect(),
            finetuned: self
                .finetuned
                .into_iter()
                .map(|row| row.into_iter().map(|c| c.unwrap()).collect())
                .collect(),
            questions: self.questions.into_iter().map(|q| q.unwrap_or(0)).collect(),
        })
    }
}

/// How the per-target ceiling U_j is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CeilingMode {
    /// A fixed ceiling (default 100), optionally overridden per task.
    Fixed,
    /// The best accuracy observed in the target's column (baseline
    /// included), computed per (model, seed) matrix.
    BestObserved,
}

/// Per-target ceiling specification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeilingSpec<S> {
    pub mode: CeilingMode,
    pub fixed_value: S,
    /// Explicit per-task ceilings; these win in either mode.
    pub per_task_override: BTreeMap<String, S>,
}

impl<S: Scalar> CeilingSpec<S> {
    pub fn fixed(value: S) -> Self {
        Self {
            mode: CeilingMode::Fixed,
            fixed_value: value,
            per_task_override: BTreeMap::new(),
        }
    }

    pub fn best_observed() -> Self {
        Self {
            mode: CeilingMode::BestObserved,
            fixed_value: S::from_f64_lossy(100.0),
            per_task_override: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let hundred = S::from_f64_lossy(100.0);
        if self.mode == CeilingMode::Fixed
            && !(self.fixed_value > S::zero() && self.fixed_value <= hundred)
        {
            return Err(Error::InvalidConfig(format!(
                "fixed ceiling {} outside (0, 100]",
                self.fixed_value
            )));
        }
        for (id, value) in &self.per_task_override {
            if !(*value > S::zero() && *value <= hundred) {
                return Err(Error::InvalidConfig(format!(
                    "ceiling override {value} for task {id:?} outside (0, 100]"
                )));
            }
        }
        Ok(())
    }
}

impl<S: Scalar> Default for CeilingSpec<S> {
    fn default() -> Self {
        Self::fixed(S::from_f64_lossy(100.0))
    }
}

/// How the mixture-selection threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionStrategy<S> {
    /// Keep sources whose mean PGF toward the target strictly exceeds this
    /// value.
    AbsoluteThreshold(S),
    /// Keep sources strictly above the given percentile of the target
    /// column's positive entries.
    ColumnPercentile(S),
}

impl<S: Scalar> Default for SelectionStrategy<S> {
    fn default() -> Self {
        Self::AbsoluteThreshold(S::zero())
    }
}

/// Tunable analysis parameters, with the defaults used throughout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig<S> {
    /// Denominator stabilizer in the PGF ratio.
    pub epsilon: S,
    /// Whether Δ/Θ sums include the self-transfer diagonal.
    pub include_diagonal_in_scores: bool,
    /// Cells with ceiling - baseline below this gap carry a warning.
    pub min_gap_warn: S,
    /// Significance level for cliques and personas.
    pub alpha: S,
    /// Percent of strongest edges (per sign class) kept in the graph.
    pub edge_percentile: S,
    /// Mixture-selection thresholding strategy.
    pub selection: SelectionStrategy<S>,
}

impl<S: Scalar> Default for AnalysisConfig<S> {
    fn default() -> Self {
        Self {
            epsilon: S::from_f64_lossy(1e-6),
            include_diagonal_in_scores: true,
            min_gap_warn: S::from_f64_lossy(0.5),
            alpha: S::from_f64_lossy(0.05),
            edge_percentile: S::from_f64_lossy(20.0),
            selection: SelectionStrategy::default(),
        }
    }
}

impl<S: Scalar> AnalysisConfig<S> {
    pub fn validate(&self) -> Result<()> {
        if self.epsilon <= S::zero() || self.epsilon.is_nan() {
            return Err(Error::InvalidConfig(format!(
                "epsilon {} must be positive",
                self.epsilon
            )));
        }
        let hundred = S::from_f64_lossy(100.0);
        if !(self.edge_percentile > S::zero() && self.edge_percentile <= hundred) {
            return Err(Error::InvalidConfig(format!(
                "edge percentile {} outside (0, 100]",
                self.edge_percentile
            )));
        }
        if !(self.alpha > S::zero() && self.alpha < S::one()) {
            return Err(Error::InvalidConfig(format!(
                "alpha {} outside (0, 1)",
                self.alpha
            )));
        }
        if let SelectionStrategy::ColumnPercentile(q) = self.selection {
            if !(q >= S::zero() && q <= hundred) {
                return Err(Error::InvalidConfig(format!(
                    "selection percentile {q} outside [0, 100]"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_tasks() -> Vec<TaskSpec> {
        vec![
            TaskSpec::new("a", "A", PerceptualLevel::Low, Granularity::Pixel),
            TaskSpec::new("b", "B", PerceptualLevel::High, Granularity::Image),
        ]
    }

    #[test]
    fn blink_set_has_13_tasks() {
        let set = TaskSet::blink();
        assert_eq!(set.len(), 13);
        assert_eq!(
            set.abbreviation(set.index_of("relative_depth").unwrap()),
            "RD"
        );
        // index <-> id mapping is a bijection
        for (idx, task) in set.tasks().iter().enumerate() {
            assert_eq!(set.index_of(&task.id), Some(idx));
        }
    }

    #[test]
    fn single_task_rejected() {
        let err = TaskSet::new(vec![two_tasks().remove(0)]).unwrap_err();
        match err {
            Error::InvalidTaskSet(v) => assert_eq!(v, vec![TaskSetViolation::TooFewTasks(1)]),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_task_list_rejected() {
        let err = TaskSet::new(Vec::new()).unwrap_err();
        match err {
            Error::InvalidTaskSet(v) => assert!(v.contains(&TaskSetViolation::EmptyTaskList)),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_named_in_error() {
        let mut tasks = two_tasks();
        tasks.push(TaskSpec::new(
            "a",
            "A2",
            PerceptualLevel::Mid,
            Granularity::Crop,
        ));
        let err = TaskSet::new(tasks).unwrap_err();
        match err {
            Error::InvalidTaskSet(v) => {
                assert!(v.contains(&TaskSetViolation::DuplicateTaskId("a".into())))
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn all_violations_reported_together() {
        let tasks = vec![
            TaskSpec::new("a", "", PerceptualLevel::Low, Granularity::Pixel),
            TaskSpec::new("a", "X", PerceptualLevel::Mid, Granularity::Crop),
            TaskSpec::new("b", "X", PerceptualLevel::High, Granularity::Image),
        ];
        match TaskSet::new(tasks).unwrap_err() {
            Error::InvalidTaskSet(v) => assert_eq!(v.len(), 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    fn record(source: Source, target: &str, accuracy: f64, m: u32) -> EvalRecord<f64> {
        EvalRecord {
            model_id: "m".into(),
            seed: 0,
            source,
            target: target.into(),
            accuracy,
            num_questions: m,
        }
    }

    fn complete_records() -> Vec<EvalRecord<f64>> {
        let mut records = vec![
            record(Source::Baseline, "a", 50.0, 10),
            record(Source::Baseline, "b", 60.0, 10),
        ];
        for (src, tgt, acc) in [
            ("a", "a", 80.0),
            ("a", "b", 70.0),
            ("b", "a", 40.0),
            ("b", "b", 90.0),
        ] {
            records.push(record(Source::Task(src.into()), tgt, acc, 10));
        }
        records
    }

    #[test]
    fn assembles_complete_group() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let assembly = assemble_matrices(&complete_records(), &set).unwrap();
        assert_eq!(assembly.matrices.len(), 1);
        let m = &assembly.matrices[0];
        assert_eq!(m.baseline, vec![50.0, 60.0]);
        assert_eq!(m.finetuned, vec![vec![80.0, 70.0], vec![40.0, 90.0]]);
        assert_eq!(m.questions, vec![10, 10]);
        assert!(assembly.warnings.is_empty());
    }

    #[test]
    fn assembly_is_record_order_invariant() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let mut records = complete_records();
        let forward = assemble_matrices(&records, &set).unwrap();
        records.reverse();
        let backward = assemble_matrices(&records, &set).unwrap();
        assert_eq!(forward.matrices, backward.matrices);
    }

    #[test]
    fn missing_baseline_cell_reported() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let records: Vec<_> = complete_records()
            .into_iter()
            .filter(|r| !(r.source == Source::Baseline && r.target == "b"))
            .collect();
        match assemble_matrices(&records, &set).unwrap_err() {
            Error::MissingCell { cells, .. } => {
                assert_eq!(
                    cells,
                    vec![(BASELINE_SENTINEL.to_string(), "b".to_string())]
                )
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn conflicting_duplicate_cell_rejected() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let mut records = complete_records();
        records.push(record(Source::Task("a".into()), "b", 75.0, 10));
        assert!(matches!(
            assemble_matrices(&records, &set).unwrap_err(),
            Error::DuplicateCell { .. }
        ));
    }

    #[test]
    fn unknown_task_rejected() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let records = vec![record(Source::Task("zz".into()), "a", 10.0, 10)];
        assert!(matches!(
            assemble_matrices(&records, &set).unwrap_err(),
            Error::UnknownTaskId(id) if id == "zz"
        ));
    }

    #[test]
    fn off_grid_accuracy_warns_but_passes() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let mut records = complete_records();
        // 55.5 is not a multiple of 100/10
        records[2].accuracy = 55.5;
        let assembly = assemble_matrices(&records, &set).unwrap();
        assert_eq!(assembly.warnings.len(), 1);
    }

    #[test]
    fn zero_question_sentinel_disables_grid_check() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let mut records = complete_records();
        for r in &mut records {
            r.num_questions = 0;
        }
        records[2].accuracy = 55.5;
        let assembly = assemble_matrices(&records, &set).unwrap();
        assert!(assembly.warnings.is_empty());
    }

    #[test]
    fn accuracy_out_of_bounds_is_hard_error() {
        let set = TaskSet::new(two_tasks()).unwrap();
        let records = vec![record(Source::Baseline, "a", 100.5, 10)];
        assert!(matches!(
            assemble_matrices(&records, &set).unwrap_err(),
            Error::AccuracyOutOfBounds { .. }
        ));
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut config = AnalysisConfig::<f64>::default();
        config.validate().unwrap();
        config.alpha = 1.0;
        assert!(config.validate().is_err());
        config = AnalysisConfig::default();
        config.edge_percentile = 0.0;
        assert!(config.validate().is_err());
        config = AnalysisConfig::default();
        config.epsilon = 0.0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn thirteen_task_assembly_matches_cell_lookup() {
        // every cell of the assembled matrix must equal the one record
        // that produced it, regardless of record order
        let set = TaskSet::blink();
        let n = set.len();
        let mut records = Vec::new();
        let acc_of = |i: Option<usize>, j: usize| -> f64 {
            let base = 30.0 + j as f64 * 2.0;
            match i {
                None => base,
                Some(i) => (base + ((i * 31 + j * 17) % 60) as f64).min(100.0),
            }
        };
        for j in 0..n {
            records.push(record_for(&set, None, j, acc_of(None, j)));
            for i in 0..n {
                records.push(record_for(&set, Some(i), j, acc_of(Some(i), j)));
            }
        }
        // shuffle deterministically
        let mut state = 0x5eedu64;
        for k in (1..records.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            records.swap(k, (state as usize) % (k + 1));
        }
        let assembly = assemble_matrices(&records, &set).unwrap();
        assert_eq!(assembly.matrices.len(), 1);
        let m = &assembly.matrices[0];
        for r in &records {
            let j = set.index_of(&r.target).unwrap();
            let got = match &r.source {
                Source::Baseline => m.baseline[j],
                Source::Task(id) => m.finetuned[set.index_of(id).unwrap()][j],
            };
            assert_eq!(got, r.accuracy, "({} -> {})", r.source, r.target);
        }
    }

    fn record_for(
        set: &TaskSet,
        source: Option<usize>,
        target: usize,
        accuracy: f64,
    ) -> EvalRecord<f64> {
        EvalRecord {
            model_id: "m".into(),
            seed: 0,
            source: match source {
                None => Source::Baseline,
                Some(i) => Source::Task(set.id(i).to_string()),
            },
            target: set.id(target).to_string(),
            accuracy,
            num_questions: 0,
        }
    }
}
