//! Synthetic demonstrations with known anchors, models and viewpoints.

mod generate;
mod spec;

pub use generate::{generate, write_output, AnchorTruth, DirectionTruth, GroundTruth, SynthOutput, TrialTruth};
pub use spec::{
    MotionModelKind, MotionSpec, NoiseSpec, NominalSpec, PaddingSpec, ScenarioSpec, VariationSpec, WrenchModelKind,
    WrenchSpec,
};
