//! The contact condition: Reeb fields, volume coefficients and certificates.

pub mod certificate;
pub mod reeb;
pub mod sampler;
pub mod volume;

pub use certificate::{
    express_in, nonvanishing_certificate, verify_hint, BoundData, BoundHint, Certificate, NamedPoint, Outcome, Sign, SignMethod, Status,
    Witness,
};
pub use reeb::{reeb_field, ReebField};
pub use sampler::{base_point, random_unit_vector, relation_points, unit_point, SampleConfig};
pub use volume::{contact_check, volume_coefficient, volume_form, VolumeReport};

#[cfg(test)]
mod tests;
