//! Browser bindings. Every function takes and returns JSON text so the page needs no glue
//! beyond `JSON.parse`.

use fairmatch::mechanism::Model;
use fairmatch::oracle::{manipulation_experiment, Deviation};
use fairmatch::{fixtures, parse_instance, report, Instance};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn load(text: &str) -> Result<Instance, String> {
    parse_instance(text).map_err(|e| e.to_string())
}

fn csv(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Built-in instances as `[{name, instance}]`.
pub fn presets_json() -> String {
    let items: Vec<Value> = fixtures::all()
        .iter()
        .map(|(name, text)| json!({ "name": name, "instance": serde_json::from_str::<Value>(text).unwrap() }))
        .collect();
    Value::Array(items).to_string()
}

/// Classes plus both egalitarian profiles.
pub fn analyze_json(instance: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let run = || -> fairmatch::Result<Value> {
        Ok(json!({
            "ged": report::ged_report(&inst)?,
            "indivisible": report::solve_report(&inst, Model::Indivisible)?,
            "divisible": report::solve_report(&inst, Model::Divisible)?,
        }))
    };
    run().map(|v| v.to_string()).map_err(|e| e.to_string())
}

/// The lottery and `samples` seeded draws from it.
pub fn lottery_json(instance: &str, samples: u32, seed: u32) -> Result<String, String> {
    let inst = load(instance)?;
    let run = || -> fairmatch::Result<Value> {
        Ok(json!({
            "lottery": report::lottery_report(&inst)?,
            "draws": report::sample_report(&inst, samples as usize, seed as u64)?["samples"],
        }))
    };
    run().map(|v| v.to_string()).map_err(|e| e.to_string())
}

/// Coalition and hidden links as comma-separated text, links written `u-v`.
pub fn manipulate_json(instance: &str, coalition: &str, hide: &str) -> Result<String, String> {
    let inst = load(instance)?;
    let coalition: Vec<String> = csv(coalition).map(String::from).collect();
    let links = csv(hide)
        .map(|l| {
            l.split_once('-')
                .map(|(u, v)| (u.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| format!("link `{l}` must be written u-v"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let deviations = if links.is_empty() { vec![] } else { vec![Deviation::HideLinks { links }] };
    manipulation_experiment(&inst, &coalition, &deviations)
        .map(|r| r.to_json().to_string())
        .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[wasm_bindgen]
pub fn analyze(instance: &str) -> Result<String, JsValue> {
    analyze_json(instance).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lottery(instance: &str, samples: u32, seed: u32) -> Result<String, JsValue> {
    lottery_json(instance, samples, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn manipulate(instance: &str, coalition: &str, hide: &str) -> Result<String, JsValue> {
    manipulate_json(instance, coalition, hide).map_err(|e| JsValue::from_str(&e))
}
