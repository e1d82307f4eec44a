//! TOML schema for synthetic-dataset generation: one shared effects matrix
//! and task set, expanded into one planted structure per model with a
//! per-model effect scale.

use serde::Deserialize;

use pgflab_core::synth::{PlantedClique, PlantedPersona};
use pgflab_core::{PlantedStructure, TaskSet, TaskSpec};

fn default_scale() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
pub struct ModelEntry {
    pub model_id: String,
    /// Multiplier applied to every effect for this model.
    #[serde(default = "default_scale")]
    pub effect_scale: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub rng_seed: u64,
    #[serde(default)]
    pub noise_std: f64,
    pub seeds: Vec<i64>,
    /// Task definitions; the builtin 13-task perception set when omitted.
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
    pub baseline: Vec<f64>,
    pub ceiling: Vec<f64>,
    pub questions: Vec<u32>,
    pub effects: Vec<Vec<f64>>,
    pub models: Vec<ModelEntry>,
    #[serde(default)]
    pub planted_cliques: Vec<PlantedClique>,
    #[serde(default)]
    pub planted_personas: Vec<PlantedPersona>,
}

impl SynthConfig {
    pub fn into_structures(self) -> pgflab_core::Result<Vec<PlantedStructure>> {
        let task_set = if self.tasks.is_empty() {
            TaskSet::blink()
        } else {
            TaskSet::new(self.tasks)?
        };
        let mut structures = Vec::with_capacity(self.models.len());
        for model in &self.models {
            let effects: Vec<Vec<f64>> = self
                .effects
                .iter()
                .map(|row| row.iter().map(|v| v * model.effect_scale).collect())
                .collect();
            let structure = PlantedStructure {
                model_id: model.model_id.clone(),
                task_set: task_set.clone(),
                baseline: self.baseline.clone(),
                ceiling: self.ceiling.clone(),
                effects,
                planted_cliques: self.planted_cliques.clone(),
                planted_personas: self.planted_personas.clone(),
                noise_std: self.noise_std,
                questions: self.questions.clone(),
                seeds: self.seeds.clone(),
                rng_seed: self.rng_seed,
            };
            structure.validate()?;
            structures.push(structure);
        }
        Ok(structures)
    }
}
