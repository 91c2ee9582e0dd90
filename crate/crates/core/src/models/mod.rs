//! Constructors for CAR priors, bisquare bases, areal aggregation, and the
//! basis-plus-CAR block model.

mod basis;
mod car;
mod frk;
mod regions;
pub mod synthetic;

pub use basis::{bisquare_eval, Basis1D};
pub use car::{car1d_second_order, car_first_order};
pub use frk::{frk_car_assemble, frk_car_model};
pub use regions::RegionGraph;
