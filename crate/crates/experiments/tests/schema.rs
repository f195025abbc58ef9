use std::collections::BTreeSet;

use geophase_experiments::config::{Experiment, ExperimentConfig};
use serde_json::Value;

fn schema() -> Value {
    let text = include_str!("../schema/config.schema.json");
    serde_json::from_str(text).unwrap()
}

#[test]
fn schema_lists_every_config_key() {
    let schema = schema();
    let props: BTreeSet<String> = schema["properties"]
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    let mut cfg = ExperimentConfig::defaults(Experiment::Fig2);
    cfg.jobs = Some(2);
    let keys: BTreeSet<String> = serde_json::to_value(&cfg)
        .unwrap()
        .as_object()
        .unwrap()
        .keys()
        .cloned()
        .collect();
    assert_eq!(props, keys);
    assert_eq!(schema["additionalProperties"], Value::Bool(false));
}

#[test]
fn model_names_match_the_registry() {
    let schema = schema();
    let names: BTreeSet<&str> = schema["properties"]["model"]["properties"]["name"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    let reg = geophase::registry::FamilyRegistry::with_builtins();
    let registered: BTreeSet<&str> = reg.names().into_iter().collect();
    assert_eq!(names, registered);
}
