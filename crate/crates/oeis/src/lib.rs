//! OEIS cross-checks for recurrence triangles: b-file parsing, an offline
//! fixture set with a cached HTTP fallback, row-by-row verification against
//! a triangle, and recovery of the parameter family from a triangle prefix.

mod bfile;
mod fetch;
mod fixtures;
mod identify;
mod layout;
mod verify;

pub use bfile::{parse_bfile, valid_anum, BfileError, OeisEntry, Source};
pub use fetch::{default_cache_dir, fetch, FetchError, Fetcher, DEFAULT_BASE_URL};
pub use fixtures::{fixture, fixture_ids, FixtureInfo};
pub use identify::{identify, rank, IdentifyError, ParamFamily};
pub use layout::TriangleLayout;
pub use verify::{verify_against, Mismatch, VerifyReport, VerifyStatus};
