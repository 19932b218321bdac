// SPDX-License-Identifier: Apache-2.0

pub mod ext_real;
pub mod forecast;
pub mod mutation;
pub mod quadrature;
pub mod report;
pub mod sandbox;
pub mod search;
pub mod tasks;
