//! Discovery of recurring spatio-temporal activity patterns on graphs.
//!
//! A spatial graph carries one time series per node. Thresholding the series
//! gives a bit-packed activation mask, and the mask together with the graph
//! defines the causal multilayer graph of activity: one layer per time step,
//! with directed edges from an active node to itself and to its active
//! neighbours on the next layer. Weakly connected components of that graph
//! are dynamic activated components; they are encoded as feature vectors,
//! clustered with k-means and summarised per cluster as an average
//! activation component.
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature enables
//! `std::error::Error` integration and `parallel` enables rayon-backed
//! workers for the builder and the k-means assignment step.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod aac;
pub mod activation;
pub mod bits;
pub mod build;
pub mod cluster;
pub mod components;
mod error;
pub mod features;
pub mod graph;
pub mod synth;
mod union_find;
pub mod verify;

pub use aac::{AverageComponent, EdgeNormalization};
pub use activation::{ActivationMask, EdgeMask, Normalization, SignalMatrix, ZscoreScope};
pub use build::{BuildStats, CausalActivityGraph, CausalEdge, EdgeKind, LayerNode};
pub use cluster::{ClusterModel, KMeansConfig, ScanRow};
pub use components::{ComponentSet, DynamicComponent, SummaryRow};
pub use error::{Error, Result};
pub use features::{DynamicFeatureVector, StaticFeatureVector};
pub use graph::{EdgeEvents, IdMap, SpatialEdge, SpatialGraph};
pub use verify::{Mismatch, VerifyReport};
