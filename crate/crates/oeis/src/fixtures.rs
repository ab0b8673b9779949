use std::collections::BTreeMap;
use std::sync::OnceLock;

use gkp_core::ParamTuple;
use serde::Deserialize;

use crate::bfile::{parse_bfile, OeisEntry, Source};
use crate::layout::TriangleLayout;

const MANIFEST: &str = include_str!("../fixtures/manifest.json");

const FILES: &[(&str, &str)] = &[
    ("b007318.txt", include_str!("../fixtures/b007318.txt")),
    ("b008275.txt", include_str!("../fixtures/b008275.txt")),
    ("b008277.txt", include_str!("../fixtures/b008277.txt")),
    ("b008279.txt", include_str!("../fixtures/b008279.txt")),
    ("b008292.txt", include_str!("../fixtures/b008292.txt")),
    ("b008297.txt", include_str!("../fixtures/b008297.txt")),
    ("b008517.txt", include_str!("../fixtures/b008517.txt")),
    ("b019538.txt", include_str!("../fixtures/b019538.txt")),
    ("b094587.txt", include_str!("../fixtures/b094587.txt")),
    ("b105278.txt", include_str!("../fixtures/b105278.txt")),
    ("b132393.txt", include_str!("../fixtures/b132393.txt")),
    ("b173018.txt", include_str!("../fixtures/b173018.txt")),
];

#[derive(Clone, Debug, Deserialize)]
struct RawInfo {
    file: String,
    params: String,
    layout: TriangleLayout,
}

/// Manifest entry for a bundled b-file.
#[derive(Clone, Debug)]
pub struct FixtureInfo {
    pub anum: String,
    pub file: String,
    pub params: ParamTuple,
    pub layout: TriangleLayout,
}

fn manifest() -> &'static BTreeMap<String, FixtureInfo> {
    static M: OnceLock<BTreeMap<String, FixtureInfo>> = OnceLock::new();
    M.get_or_init(|| {
        let raw: BTreeMap<String, RawInfo> = serde_json::from_str(MANIFEST).expect("bundled manifest");
        raw.into_iter()
            .map(|(anum, r)| {
                let params = ParamTuple::parse_list(&r.params).expect("bundled params");
                (anum.clone(), FixtureInfo { anum, file: r.file, params, layout: r.layout })
            })
            .collect()
    })
}

pub fn fixture_ids() -> Vec<String> {
    manifest().keys().cloned().collect()
}

/// Manifest data and parsed values of a bundled A-number.
pub fn fixture(anum: &str) -> Option<(FixtureInfo, OeisEntry)> {
    let info = manifest().get(anum)?.clone();
    let text = FILES.iter().find(|(f, _)| *f == info.file).map(|(_, t)| *t)?;
    let mut e = parse_bfile(text).expect("bundled b-file");
    e.anum = anum.to_string();
    e.source = Source::Fixture;
    Some((info, e))
}
