//! Example scenarios shipped with the crate: published IR experiment
//! measurements (running time, facility energy) under the reference
//! Brisbane data-center environment.

use crate::scenario::ScenarioDoc;

const FILES: &[(&str, &str)] = &[
    ("table1-bm25", include_str!("../scenarios/table1-bm25.json")),
    ("table1-lambdamart", include_str!("../scenarios/table1-lambdamart.json")),
    ("table1-dpr", include_str!("../scenarios/table1-dpr.json")),
    ("table1-monobert", include_str!("../scenarios/table1-monobert.json")),
    ("table1-tildev2", include_str!("../scenarios/table1-tildev2.json")),
    (
        "table1-tildev2-doctquery",
        include_str!("../scenarios/table1-tildev2-doctquery.json"),
    ),
    ("table1-unicoil", include_str!("../scenarios/table1-unicoil.json")),
    (
        "table1-unicoil-doctquery",
        include_str!("../scenarios/table1-unicoil-doctquery.json"),
    ),
];

/// `(name, document)` pairs in a stable order.
pub fn scenarios() -> Vec<(&'static str, ScenarioDoc)> {
    FILES
        .iter()
        .map(|(name, text)| (*name, ScenarioDoc::from_json(text).expect("bundled scenarios parse")))
        .collect()
}

pub fn scenario(name: &str) -> Option<ScenarioDoc> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ScenarioDoc::from_json(text).expect("bundled scenarios parse"))
}

/// Raw JSON text of a bundled scenario.
pub fn scenario_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}
