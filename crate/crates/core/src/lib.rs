//! Exact computation toolkit for Turán-type problems in complete
//! multipartite hypergraphs: closed-form values, extremal constructions,
//! branch-and-bound oracles, shifting, an LP bound and rainbow matchings.

pub mod constructions;
pub mod error;
pub mod formulas;
pub mod hypercore;
pub mod lpbound;
pub mod rainbow;
pub mod shifting;
pub mod solvers;

pub use error::{Error, Result};
pub use hypercore::{Edge, MultipartiteHypergraph, Shape, Vertex};
