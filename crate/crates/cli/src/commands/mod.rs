pub mod m2;
pub mod noise;
pub mod preprocess;
pub mod score;
pub mod split;
pub mod stats;
pub mod testsets;
