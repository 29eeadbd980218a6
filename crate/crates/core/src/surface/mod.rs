//! Surface groups: words, Fuchsian holonomy from Fenchel-Nielsen data and
//! limit-set samples.

mod fenchel_nielsen;
mod limit_set;
mod word;

pub use fenchel_nielsen::{
    attracting_fixed_point, axis, fuchsian_from_fn, jorgensen_witness, FNCoordinates,
    FuchsianHolonomy, Holonomy,
};
pub use limit_set::{hausdorff_distance, limit_set_sample, word_images, PointDedup};
pub use word::{enumerate_words, visit_words, GroupWord, Letter, SurfacePresentation};
