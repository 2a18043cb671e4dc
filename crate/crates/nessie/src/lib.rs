// Copyright 2026 Nessie Contributors
// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps, CNTD searches, rectification maps and the batch front end
//! built on [`nessie_core`].

pub mod cntd;
pub mod config;
pub mod evaluate;
pub mod output;
pub mod rectmap;
pub mod run;
pub mod setup;
pub mod sweep;
pub mod table;
