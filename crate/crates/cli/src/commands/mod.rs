pub mod action;
pub mod characterize;
pub mod episode;
pub mod heatmap;
pub mod prediction;
