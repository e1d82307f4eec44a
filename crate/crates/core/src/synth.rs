//! Synthetic evaluation datasets with planted transfer structure.
//!
//! The generator inverts the PGF definition: given target effect values,
//! baselines, and ceilings, it emits the accuracies that reproduce those
//! effects, optionally with gaussian measurement noise and quantization to
//! the accuracy grid of each task's question count. Running the full
//! analysis on generated records and checking it recovers the planted
//! cliques and personas is the pipeline's ground-truth test.

use rand::SeedableRng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::aggregate::{malleability_all, transferability_all};
use crate::error::{Error, Result};
use crate::graph::{Clique, EdgeSign};
use crate::model::{AnalysisConfig, EvalRecord, Source, TaskSet};
use crate::personas::{Persona, PersonaReport};
use crate::pgf::PgfMatrix;
use crate::scalar::Scalar;

/// A clique whose internal ordered pairs the generator plants with the
/// given sign.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedClique {
    pub members: Vec<String>,
    pub sign: EdgeSign,
}

/// A persona the generator plants for a task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPersona {
    pub task_id: String,
    pub persona: Persona,
}

/// Ground-truth description of one synthetic model's transfer behavior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedStructure<S> {
    pub model_id: String,
    pub task_set: TaskSet,
    /// Baseline accuracy per task, percent.
    pub baseline: Vec<S>,
    /// Ceiling per task, percent; must exceed the baseline.
    pub ceiling: Vec<S>,
    /// Target PGF value per (source, target) cell.
    pub effects: Vec<Vec<S>>,
    pub planted_cliques: Vec<PlantedClique>,
    pub planted_personas: Vec<PlantedPersona>,
    /// Gaussian noise added to every accuracy, in percent.
    pub noise_std: S,
    /// Question count per task; 0 disables quantization for that task.
    pub questions: Vec<u32>,
    /// Finetuning seeds to emit records for.
    pub seeds: Vec<i64>,
    /// Master seed of the noise stream.
    pub rng_seed: u64,
}

/// Records for one structure plus the cells that hit the [0, 100] clamp,
/// which exact-inversion checks should skip.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedData<S> {
    pub records: Vec<EvalRecord<S>>,
    /// (seed, source label, target id) of clamped cells.
    pub saturated: Vec<(i64, String, String)>,
}

impl<S: Scalar> PlantedStructure<S> {
    /// Check internal consistency: dimensions, baseline < ceiling, planted
    /// cliques and personas actually implied by the effects matrix. Every
    /// problem is listed, not just the first.
    pub fn validate(&self) -> Result<()> {
        let n = self.task_set.len();
        let mut problems = Vec::new();
        for (name, len) in [
            ("baseline", self.baseline.len()),
            ("ceiling", self.ceiling.len()),
            ("questions", self.questions.len()),
            ("effects rows", self.effects.len()),
        ] {
            if len != n {
                problems.push(format!("{name} has length {len}, expected {n}"));
            }
        }
        if self.effects.iter().any(|row| row.len() != n) {
            problems.push(format!("effects rows must all have length {n}"));
        }
        if self.seeds.is_empty() {
            problems.push("no seeds listed".to_string());
        }
        let mut sorted_seeds = self.seeds.clone();
        sorted_seeds.sort_unstable();
        sorted_seeds.dedup();
        if sorted_seeds.len() != self.seeds.len() {
            problems.push("seed values must be distinct".to_string());
        }
        if self.noise_std < S::zero() || self.noise_std.is_nan() {
            problems.push(format!("noise_std {} must be nonnegative", self.noise_std));
        }
        if !problems.is_empty() {
            return Err(Error::InconsistentStructure(problems));
        }

        let hundred = S::from_f64_lossy(100.0);
        for j in 0..n {
            if !(self.baseline[j] >= S::zero() && self.baseline[j] <= hundred) {
                problems.push(format!(
                    "baseline {} for task {:?} outside [0, 100]",
                    self.baseline[j],
                    self.task_set.id(j)
                ));
            }
            if !(self.ceiling[j] > self.baseline[j] && self.ceiling[j] <= hundred) {
                problems.push(format!(
                    "ceiling {} for task {:?} must lie in (baseline, 100]",
                    self.ceiling[j],
                    self.task_set.id(j)
                ));
            }
        }

        for clique in &self.planted_cliques {
            let mut indices = Vec::new();
            for member in &clique.members {
                match self.task_set.resolve(member) {
                    Some(i) => indices.push(i),
                    None => problems.push(format!("clique member {member:?} is not a task")),
                }
            }
            if indices.len() < 2 {
                problems.push(format!(
                    "planted clique {:?} needs at least 2 resolvable members",
                    clique.members
                ));
                continue;
            }
            for &i in &indices {
                for &j in &indices {
                    if i == j {
                        continue;
                    }
                    let v = self.effects[i][j];
                    let ok = match clique.sign {
                        EdgeSign::Positive => v > S::zero(),
                        EdgeSign::Negative => v < S::zero(),
                    };
                    if !ok {
                        problems.push(format!(
                            "effect ({} -> {}) = {v} breaks the {:?} clique {:?}",
                            self.task_set.id(i),
                            self.task_set.id(j),
                            clique.sign,
                            clique.members
                        ));
                    }
                }
            }
        }

        // personas implied by the effects matrix: magnitudes vs. the mean
        // over tasks, on the effects treated as the PGF matrix they invert to
        if !self.planted_personas.is_empty() {
            let pgf = PgfMatrix {
                model_id: self.model_id.clone(),
                seed: 0,
                values: self.effects.clone(),
                ceiling_used: self.ceiling.clone(),
                warnings: vec![],
            };
            let config = AnalysisConfig::<S>::default();
            let transfer = transferability_all(&pgf, &self.task_set, &config)?;
            let malle = malleability_all(&pgf, &self.task_set, &config)?;
            let nf = S::from_count(n);
            for planted in &self.planted_personas {
                let Some(idx) = self.task_set.resolve(&planted.task_id) else {
                    problems.push(format!("persona task {:?} is not a task", planted.task_id));
                    continue;
                };
                let values: Vec<S> = match planted.persona {
                    Persona::Donor => transfer.iter().map(|s| s.positive).collect(),
                    Persona::Pirate => transfer.iter().map(|s| -s.negative).collect(),
                    Persona::Sponge => malle.iter().map(|s| s.positive).collect(),
                    Persona::Sieve => malle.iter().map(|s| -s.negative).collect(),
                };
                let avg = values.iter().fold(S::zero(), |a, &b| a + b) / nf;
                if values[idx] <= avg || values[idx].is_nan() {
                    problems.push(format!(
                        "task {:?} does not satisfy planted persona {} on the effects \
                         matrix ({} vs average {})",
                        planted.task_id,
                        planted.persona.label(),
                        values[idx],
                        avg
                    ));
                }
            }
        }

        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InconsistentStructure(problems))
        }
    }

    /// Generate records for every (seed, cell) of this structure.
    ///
    /// Accuracy of cell (i, j) is baseline_j + effect_ij * (ceiling_j -
    /// baseline_j) plus gaussian noise, clamped to [0, 100] and then
    /// quantized to the task's accuracy grid. Noise is drawn from an
    /// independent substream per (seed, row, target), so the output does
    /// not depend on generation order, only on `rng_seed`.
    pub fn generate(&self) -> Result<GeneratedData<S>> {
        self.validate()?;
        let n = self.task_set.len();
        let mut records = Vec::with_capacity(self.seeds.len() * n * (n + 1));
        let mut saturated = Vec::new();
        for &seed in &self.seeds {
            for j in 0..n {
                let value = self.baseline[j] + self.noise(seed, None, j);
                let (acc, clamped) = finalize(value, self.questions[j]);
                if clamped {
                    saturated.push((
                        seed,
                        Source::Baseline.to_string(),
                        self.task_set.id(j).to_string(),
                    ));
                }
                records.push(EvalRecord {
                    model_id: self.model_id.clone(),
                    seed,
                    source: Source::Baseline,
                    target: self.task_set.id(j).to_string(),
                    accuracy: acc,
                    num_questions: self.questions[j],
                });
            }
            for i in 0..n {
                for j in 0..n {
                    let clean = self.baseline[j]
                        + self.effects[i][j] * (self.ceiling[j] - self.baseline[j]);
                    let value = clean + self.noise(seed, Some(i), j);
                    let (acc, clamped) = finalize(value, self.questions[j]);
                    if clamped {
                        saturated.push((
                            seed,
                            self.task_set.id(i).to_string(),
                            self.task_set.id(j).to_string(),
                        ));
                    }
                    records.push(EvalRecord {
                        model_id: self.model_id.clone(),
                        seed,
                        source: Source::Task(self.task_set.id(i).to_string()),
                        target: self.task_set.id(j).to_string(),
                        accuracy: acc,
                        num_questions: self.questions[j],
                    });
                }
            }
        }
        Ok(GeneratedData { records, saturated })
    }

    fn noise(&self, seed: i64, source: Option<usize>, target: usize) -> S {
        if self.noise_std == S::zero() {
            return S::zero();
        }
        let key = [
            self.rng_seed,
            seed as u64,
            source.map_or(0, |i| i as u64 + 1),
            target as u64,
        ];
        let mut rng = rand_chacha::ChaCha8Rng::from_seed(derive_seed(&key));
        let std = self.noise_std.to_f64().expect("noise_std fits f64");
        let normal = Normal::new(0.0, std).expect("validated noise_std");
        S::from_f64_lossy(normal.sample(&mut rng))
    }
}

/// Clamp to [0, 100], then snap to the accuracy grid of an m-question task.
fn finalize<S: Scalar>(value: S, m: u32) -> (S, bool) {
    let hundred = S::from_f64_lossy(100.0);
    let clamped = value < S::zero() || value > hundred;
    let mut acc = value.max(S::zero()).min(hundred);
    if m > 0 {
        let mf = S::from_u32(m).expect("m fits scalar");
        acc = (acc * mf / hundred).round() * hundred / mf;
    }
    (acc, clamped)
}

/// splitmix64 expansion of a small key into a 32-byte RNG seed.
fn derive_seed(key: &[u64]) -> [u8; 32] {
    let mut state = 0x9e3779b97f4a7c15u64;
    for &k in key {
        state ^= k.wrapping_mul(0xbf58476d1ce4e5b9);
        state = splitmix64(&mut state);
    }
    let mut out = [0u8; 32];
    for chunk in out.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    out
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Recovery of one planted feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRecovery {
    pub description: String,
    pub recovered: bool,
}

/// How much of the planted structure the analysis pipeline found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub cliques: Vec<FeatureRecovery>,
    pub personas: Vec<FeatureRecovery>,
    /// Fraction of planted cliques contained in some reported clique of
    /// the same sign; 1.0 when nothing was planted.
    pub clique_recall: f64,
    /// Fraction of planted personas reported consistent; 1.0 when nothing
    /// was planted.
    pub persona_recall: f64,
    /// Fraction of reported cliques that contain a planted clique of their
    /// sign; vacuously 1.0 when nothing was planted or reported.
    pub clique_precision: f64,
    /// Fraction of reported-consistent personas that were planted;
    /// vacuously 1.0 when nothing was planted or reported.
    pub persona_precision: f64,
}

fn ratio(hits: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        hits as f64 / total as f64
    }
}

/// Compare analysis outputs against the planted structure.
///
/// A planted clique counts as recovered when its member set is a subset of
/// some reported clique of the same sign; a planted persona when its
/// report is consistent across models.
pub fn recovery_report<S: Scalar>(
    structure: &PlantedStructure<S>,
    reported_cliques: &[Clique<S>],
    reported_personas: &[PersonaReport<S>],
) -> RecoveryReport {
    let canonical = |members: &[String]| -> Vec<String> {
        let mut ids: Vec<String> = members
            .iter()
            .map(|m| {
                structure
                    .task_set
                    .resolve(m)
                    .map(|i| structure.task_set.id(i).to_string())
                    .unwrap_or_else(|| m.clone())
            })
            .collect();
        ids.sort();
        ids
    };

    let mut cliques = Vec::new();
    for planted in &structure.planted_cliques {
        let members = canonical(&planted.members);
        let recovered = reported_cliques
            .iter()
            .any(|c| c.sign == planted.sign && members.iter().all(|m| c.members.contains(m)));
        cliques.push(FeatureRecovery {
            description: format!("{:?} clique {:?}", planted.sign, members),
            recovered,
        });
    }

    let mut personas = Vec::new();
    for planted in &structure.planted_personas {
        let id = structure
            .task_set
            .resolve(&planted.task_id)
            .map(|i| structure.task_set.id(i).to_string())
            .unwrap_or_else(|| planted.task_id.clone());
        let recovered = reported_personas
            .iter()
            .any(|r| r.task_id == id && r.persona == planted.persona && r.consistent);
        personas.push(FeatureRecovery {
            description: format!("{} {}", planted.persona.label(), id),
            recovered,
        });
    }

    let clique_hits = cliques.iter().filter(|f| f.recovered).count();
    let persona_hits = personas.iter().filter(|f| f.recovered).count();

    let matched_reported_cliques = if structure.planted_cliques.is_empty() {
        reported_cliques.len() // vacuous
    } else {
        reported_cliques
            .iter()
            .filter(|c| {
                structure.planted_cliques.iter().any(|p| {
                    p.sign == c.sign && canonical(&p.members).iter().all(|m| c.members.contains(m))
                })
            })
            .count()
    };
    let consistent_reported: Vec<_> = reported_personas.iter().filter(|r| r.consistent).collect();
    let matched_reported_personas = if structure.planted_personas.is_empty() {
        consistent_reported.len() // vacuous
    } else {
        consistent_reported
            .iter()
            .filter(|r| {
                structure.planted_personas.iter().any(|p| {
                    p.persona == r.persona
                        && structure
                            .task_set
                            .resolve(&p.task_id)
                            .map(|i| structure.task_set.id(i) == r.task_id)
                            .unwrap_or(false)
                })
            })
            .count()
    };

    RecoveryReport {
        clique_recall: ratio(clique_hits, cliques.len()),
        persona_recall: ratio(persona_hits, personas.len()),
        clique_precision: ratio(matched_reported_cliques, reported_cliques.len()),
        persona_precision: ratio(matched_reported_personas, consistent_reported.len()),
        cliques,
        personas,
    }
}
