//! The stable file format: backend-tagged JSON for objects, morphisms,
//! complexes and grids, the query runner behind `exacta run`, and report
//! serialization. Reports are pretty-printed JSON with sorted keys, so
//! identical inputs produce byte-identical output.

use crate::cmon::{CMonCat, CMonHom, CMonoid};
use crate::diexact::{self, PartialGrid, SesMorphism};
use crate::error::{Error, Result};
use crate::fgab::{self, AbCat, AbMorphism, AbObject};
use crate::fingrp::{catalog, FinGroup, GroupHom, Grp};
use crate::homology::{self, ChainComplex, ComplexSes};
use crate::matrix::{Int, Mat};
use crate::probe::{self, AxiomId, ProbeBound, ProbeInstances, Witness};
use crate::setpt::{PointedMap, PointedSet, SetPt};
use crate::structure;
use crate::zexact::{self, ZExact};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

pub const FORMAT_VERSION: &str = "1";

fn schema_err(path: &str, msg: impl Into<String>) -> Error {
    Error::Schema { path: path.to_string(), msg: msg.into() }
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema_err(path, "expected a nonnegative integer"))
}

fn as_usize_table(v: &Value, path: &str) -> Result<Vec<usize>> {
    let arr = v.as_array().ok_or_else(|| schema_err(path, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| as_usize(x, &format!("{path}[{i}]")))
        .collect()
}

fn as_usize_matrix(v: &Value, path: &str) -> Result<Vec<Vec<usize>>> {
    let arr = v.as_array().ok_or_else(|| schema_err(path, "expected an array of rows"))?;
    arr.iter()
        .enumerate()
        .map(|(i, r)| as_usize_table(r, &format!("{path}[{i}]")))
        .collect()
}

fn as_int_matrix(v: &Value, path: &str, cols: Option<usize>) -> Result<Mat> {
    let arr = v.as_array().ok_or_else(|| schema_err(path, "expected an array of rows"))?;
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (i, r) in arr.iter().enumerate() {
        let rp = format!("{path}[{i}]");
        let row = r.as_array().ok_or_else(|| schema_err(&rp, "expected a row"))?;
        rows.push(
            row.iter()
                .enumerate()
                .map(|(j, x)| {
                    x.as_i64()
                        .map(Int::from)
                        .ok_or_else(|| schema_err(&format!("{rp}[{j}]"), "expected an integer"))
                })
                .collect::<Result<Vec<Int>>>()?,
        );
    }
    if rows.is_empty() {
        return Ok(Mat::zero(0, cols.unwrap_or(0)));
    }
    Ok(Mat::from_rows(rows))
}

fn int_matrix_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| {
                            serde_json::Number::from_i128(
                                i128::try_from(x.clone()).expect("report entry fits i128"),
                            )
                            .map(Value::Number)
                            .expect("i128 is representable")
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Backend-specific JSON encoding of objects and morphisms.
pub trait JsonBackend: ZExact + Sized {
    const KIND: &'static str;
    fn obj_from_json(&self, v: &Value, path: &str) -> Result<Self::Obj>;
    fn obj_to_json(&self, o: &Self::Obj) -> Value;
    fn mor_payload_from_json(
        &self,
        v: &Value,
        dom: &Self::Obj,
        cod: &Self::Obj,
        path: &str,
    ) -> Result<Self::Mor>;
    fn mor_payload_to_json(&self, m: &Self::Mor) -> Value;

    /// Morphism with dom and cod spelled out inline, for witnesses.
    fn mor_to_json(&self, m: &Self::Mor) -> Value {
        json!({
            "dom": self.obj_to_json(&self.dom(m)),
            "cod": self.obj_to_json(&self.cod(m)),
            "map": self.mor_payload_to_json(m),
        })
    }

    fn mor_from_json(&self, v: &Value, path: &str) -> Result<Self::Mor> {
        let dom = self.obj_from_json(
            v.get("dom").ok_or_else(|| schema_err(path, "missing dom"))?,
            &format!("{path}.dom"),
        )?;
        let cod = self.obj_from_json(
            v.get("cod").ok_or_else(|| schema_err(path, "missing cod"))?,
            &format!("{path}.cod"),
        )?;
        let map = v.get("map").ok_or_else(|| schema_err(path, "missing map"))?;
        self.mor_payload_from_json(map, &dom, &cod, &format!("{path}.map"))
    }
}

fn expect_kind(v: &Value, kind: &str, path: &str) -> Result<()> {
    match v.get("kind").and_then(|k| k.as_str()) {
        Some(k) if k == kind => Ok(()),
        Some(other) => Err(schema_err(
            &format!("{path}.kind"),
            format!("expected {kind}, found {other}"),
        )),
        None => Err(schema_err(&format!("{path}.kind"), "missing kind tag")),
    }
}

impl JsonBackend for SetPt {
    const KIND: &'static str = "setpt";

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<PointedSet> {
        expect_kind(v, "setpt", path)?;
        let size = as_usize(
            v.get("size").ok_or_else(|| schema_err(path, "missing size"))?,
            &format!("{path}.size"),
        )?;
        PointedSet::new(size)
    }

    fn obj_to_json(&self, o: &PointedSet) -> Value {
        json!({"kind": "setpt", "size": o.size})
    }

    fn mor_payload_from_json(
        &self,
        v: &Value,
        dom: &PointedSet,
        cod: &PointedSet,
        path: &str,
    ) -> Result<PointedMap> {
        let table = match v.get("table") {
            Some(t) => as_usize_table(t, &format!("{path}.table"))?,
            None => as_usize_table(v, path)?,
        };
        PointedMap::new(*dom, *cod, table)
    }

    fn mor_payload_to_json(&self, m: &PointedMap) -> Value {
        json!({"table": m.table})
    }
}

impl JsonBackend for CMonCat {
    const KIND: &'static str = "cmon";

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<CMonoid> {
        expect_kind(v, "cmon", path)?;
        let table = as_usize_matrix(
            v.get("table").ok_or_else(|| schema_err(path, "missing table"))?,
            &format!("{path}.table"),
        )?;
        CMonoid::new(table)
    }

    fn obj_to_json(&self, o: &CMonoid) -> Value {
        json!({"kind": "cmon", "table": o.op})
    }

    fn mor_payload_from_json(
        &self,
        v: &Value,
        dom: &CMonoid,
        cod: &CMonoid,
        path: &str,
    ) -> Result<CMonHom> {
        let table = match v.get("table") {
            Some(t) => as_usize_table(t, &format!("{path}.table"))?,
            None => as_usize_table(v, path)?,
        };
        CMonHom::new(dom.clone(), cod.clone(), table)
    }

    fn mor_payload_to_json(&self, m: &CMonHom) -> Value {
        json!({"table": m.table})
    }
}

impl JsonBackend for Grp {
    const KIND: &'static str = "group";

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<FinGroup> {
        if let Some(name) = v.as_str() {
            return catalog::preset(name)
                .ok_or_else(|| schema_err(path, format!("unknown group preset {name}")));
        }
        expect_kind(v, "group", path)?;
        if let Some(name) = v.get("name").and_then(|n| n.as_str()) {
            return catalog::preset(name)
                .ok_or_else(|| schema_err(path, format!("unknown group preset {name}")));
        }
        let table = as_usize_matrix(
            v.get("table").ok_or_else(|| schema_err(path, "missing table or name"))?,
            &format!("{path}.table"),
        )?;
        FinGroup::new(table)
    }

    fn obj_to_json(&self, o: &FinGroup) -> Value {
        json!({"kind": "group", "table": o.op})
    }

    fn mor_payload_from_json(
        &self,
        v: &Value,
        dom: &FinGroup,
        cod: &FinGroup,
        path: &str,
    ) -> Result<GroupHom> {
        let table = match v.get("table") {
            Some(t) => as_usize_table(t, &format!("{path}.table"))?,
            None => as_usize_table(v, path)?,
        };
        GroupHom::new(dom.clone(), cod.clone(), table)
    }

    fn mor_payload_to_json(&self, m: &GroupHom) -> Value {
        json!({"table": m.table})
    }
}

impl JsonBackend for AbCat {
    const KIND: &'static str = "ab";

    fn obj_from_json(&self, v: &Value, path: &str) -> Result<AbObject> {
        expect_kind(v, "ab", path)?;
        let rank = as_usize(
            v.get("rank").ok_or_else(|| schema_err(path, "missing rank"))?,
            &format!("{path}.rank"),
        )?;
        let rels = match v.get("relations") {
            Some(r) => as_int_matrix(r, &format!("{path}.relations"), Some(rank))?,
            None => Mat::zero(0, rank),
        };
        AbObject::new(rank, rels)
    }

    fn obj_to_json(&self, o: &AbObject) -> Value {
        json!({
            "kind": "ab",
            "rank": o.rank,
            "relations": int_matrix_to_json(&o.rels),
        })
    }

    fn mor_payload_from_json(
        &self,
        v: &Value,
        dom: &AbObject,
        cod: &AbObject,
        path: &str,
    ) -> Result<AbMorphism> {
        let raw = v.get("matrix").unwrap_or(v);
        let mat = as_int_matrix(raw, &format!("{path}.matrix"), Some(cod.rank))?;
        let mat = if mat.rows == 0 {
            Mat::zero(dom.rank.min(0), cod.rank)
        } else {
            mat
        };
        let mat = if dom.rank == 0 { Mat::zero(0, cod.rank) } else { mat };
        self.morphism(dom.clone(), cod.clone(), mat)
    }

    fn mor_payload_to_json(&self, m: &AbMorphism) -> Value {
        json!({"matrix": int_matrix_to_json(&m.mat)})
    }
}

pub fn witness_to_json<C: JsonBackend>(cat: &C, w: &Witness<C>) -> Value {
    match w {
        Witness::AntinormalPair { mu, eps } => json!({
            "shape": "antinormal-pair",
            "mu": cat.mor_to_json(mu),
            "eps": cat.mor_to_json(eps),
        }),
        Witness::SplitEpi { epi, section } => json!({
            "shape": "split-epi",
            "epi": cat.mor_to_json(epi),
            "section": cat.mor_to_json(section),
        }),
        Witness::PullbackSquare { epi, along } => json!({
            "shape": "pullback-square",
            "epi": cat.mor_to_json(epi),
            "along": cat.mor_to_json(along),
        }),
        Witness::JointlyFactoring { epi, section, sub } => json!({
            "shape": "jointly-factoring",
            "epi": cat.mor_to_json(epi),
            "section": cat.mor_to_json(section),
            "sub": cat.mor_to_json(sub),
        }),
    }
}

pub fn witness_from_json<C: JsonBackend>(cat: &C, v: &Value) -> Result<Witness<C>> {
    let shape = v
        .get("shape")
        .and_then(|s| s.as_str())
        .ok_or_else(|| schema_err("witness.shape", "missing shape"))?;
    let mor = |field: &str| -> Result<C::Mor> {
        cat.mor_from_json(
            v.get(field)
                .ok_or_else(|| schema_err(&format!("witness.{field}"), "missing"))?,
            &format!("witness.{field}"),
        )
    };
    match shape {
        "antinormal-pair" => Ok(Witness::AntinormalPair { mu: mor("mu")?, eps: mor("eps")? }),
        "split-epi" => Ok(Witness::SplitEpi { epi: mor("epi")?, section: mor("section")? }),
        "pullback-square" => {
            Ok(Witness::PullbackSquare { epi: mor("epi")?, along: mor("along")? })
        }
        "jointly-factoring" => Ok(Witness::JointlyFactoring {
            epi: mor("epi")?,
            section: mor("section")?,
            sub: mor("sub")?,
        }),
        other => Err(schema_err("witness.shape", format!("unknown shape {other}"))),
    }
}

pub fn axiom_report_to_json<C: JsonBackend>(cat: &C, r: &probe::AxiomReport<C>) -> Value {
    let mut m = Map::new();
    m.insert("axiom".into(), json!(r.axiom.to_string()));
    m.insert("backend".into(), json!(r.backend));
    m.insert("max_size".into(), json!(r.max_size));
    m.insert(
        "verdict".into(),
        json!(match r.verdict {
            probe::Verdict::NoCounterexample => "no-counterexample",
            probe::Verdict::Counterexample => "counterexample",
        }),
    );
    m.insert("checks".into(), json!(r.checks));
    m.insert("incomplete".into(), json!(r.incomplete));
    if let Some(w) = &r.witness {
        m.insert("witness".into(), witness_to_json(cat, w));
    }
    Value::Object(m)
}

/// Named values resolved from the file's `named` section.
struct NamedValues<C: JsonBackend> {
    objects: BTreeMap<String, C::Obj>,
    morphisms: BTreeMap<String, C::Mor>,
    complexes: BTreeMap<String, ChainComplex<C>>,
}

fn resolve_named<C: JsonBackend>(cat: &C, named: &Value) -> Result<NamedValues<C>> {
    let mut out = NamedValues {
        objects: BTreeMap::new(),
        morphisms: BTreeMap::new(),
        complexes: BTreeMap::new(),
    };
    let Some(map) = named.as_object() else {
        return Ok(out);
    };
    for (name, entry) in map {
        if let Some(obj) = entry.get("object") {
            let path = format!("named.{name}.object");
            out.objects.insert(name.clone(), cat.obj_from_json(obj, &path)?);
        }
    }
    for (name, entry) in map {
        if let Some(mor) = entry.get("morphism") {
            let path = format!("named.{name}.morphism");
            let dom_name = mor
                .get("dom")
                .and_then(|d| d.as_str())
                .ok_or_else(|| schema_err(&format!("{path}.dom"), "expected an object name"))?;
            let cod_name = mor
                .get("cod")
                .and_then(|d| d.as_str())
                .ok_or_else(|| schema_err(&format!("{path}.cod"), "expected an object name"))?;
            let dom = out
                .objects
                .get(dom_name)
                .ok_or_else(|| schema_err(&format!("{path}.dom"), "unknown object name"))?;
            let cod = out
                .objects
                .get(cod_name)
                .ok_or_else(|| schema_err(&format!("{path}.cod"), "unknown object name"))?;
            let m = cat.mor_payload_from_json(mor, dom, cod, &path)?;
            out.morphisms.insert(name.clone(), m);
        }
    }
    for (name, entry) in map {
        if let Some(cx) = entry.get("complex") {
            let path = format!("named.{name}.complex");
            let lo = cx
                .get("lo")
                .and_then(|l| l.as_i64())
                .ok_or_else(|| schema_err(&format!("{path}.lo"), "expected an integer"))?;
            let objs = cx
                .get("objects")
                .and_then(|o| o.as_array())
                .ok_or_else(|| schema_err(&format!("{path}.objects"), "expected names"))?;
            let objects: Vec<C::Obj> = objs
                .iter()
                .enumerate()
                .map(|(i, o)| {
                    let p = format!("{path}.objects[{i}]");
                    let n = o.as_str().ok_or_else(|| schema_err(&p, "expected a name"))?;
                    out.objects.get(n).cloned().ok_or_else(|| schema_err(&p, "unknown name"))
                })
                .collect::<Result<_>>()?;
            let ds = cx
                .get("d")
                .and_then(|d| d.as_array())
                .ok_or_else(|| schema_err(&format!("{path}.d"), "expected names"))?;
            let diffs: Vec<C::Mor> = ds
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    let p = format!("{path}.d[{i}]");
                    let n = d.as_str().ok_or_else(|| schema_err(&p, "expected a name"))?;
                    out.morphisms
                        .get(n)
                        .cloned()
                        .ok_or_else(|| schema_err(&p, "unknown morphism name"))
                })
                .collect::<Result<_>>()?;
            let complex = ChainComplex::new(cat, lo, objects, diffs)?;
            out.complexes.insert(name.clone(), complex);
        }
    }
    Ok(out)
}

impl<C: JsonBackend> NamedValues<C> {
    fn mor(&self, name: &Value, path: &str) -> Result<C::Mor> {
        let n = name.as_str().ok_or_else(|| schema_err(path, "expected a morphism name"))?;
        self.morphisms
            .get(n)
            .cloned()
            .ok_or_else(|| schema_err(path, format!("unknown morphism name {n}")))
    }

    fn obj(&self, name: &Value, path: &str) -> Result<C::Obj> {
        let n = name.as_str().ok_or_else(|| schema_err(path, "expected an object name"))?;
        self.objects
            .get(n)
            .cloned()
            .ok_or_else(|| schema_err(path, format!("unknown object name {n}")))
    }

    fn complex(&self, name: &Value, path: &str) -> Result<ChainComplex<C>> {
        let n = name.as_str().ok_or_else(|| schema_err(path, "expected a complex name"))?;
        self.complexes
            .get(n)
            .cloned()
            .ok_or_else(|| schema_err(path, format!("unknown complex name {n}")))
    }
}

fn field<'v>(q: &'v Value, name: &str) -> Result<&'v Value> {
    q.get(name).ok_or_else(|| schema_err(&format!("query.{name}"), "missing field"))
}

fn run_query<C>(cat: &C, named: &NamedValues<C>, q: &Value) -> Result<Value>
where
    C: JsonBackend + ProbeInstances + Sync,
    C::Obj: Send + Sync,
    C::Mor: Send + Sync,
{
    let op = q
        .get("op")
        .and_then(|o| o.as_str())
        .ok_or_else(|| schema_err("query.op", "missing op"))?;
    match op {
        "kernel" | "cokernel" => {
            let f = named.mor(field(q, "of")?, "query.of")?;
            let m = if op == "kernel" { cat.kernel(&f) } else { cat.cokernel(&f) };
            Ok(json!({"morphism": cat.mor_to_json(&m)}))
        }
        "factorize" => {
            let f = named.mor(field(q, "of")?, "query.of")?;
            let kind = field(q, "kind")?.as_str().unwrap_or("normal-epi");
            let fac = match kind {
                "normal-mono" => zexact::normal_mono_factorization(cat, &f),
                "normal-epi" => zexact::normal_epi_factorization(cat, &f),
                "normal" => zexact::normal_factorization(cat, &f)?,
                "image" => zexact::image_factorization(cat, &f)?,
                other => {
                    return Err(schema_err("query.kind", format!("unknown kind {other}")))
                }
            };
            Ok(json!({
                "kind": kind,
                "first": cat.mor_to_json(&fac.first),
                "second": cat.mor_to_json(&fac.second),
            }))
        }
        "classify-map" => {
            let f = named.mor(field(q, "of")?, "query.of")?;
            let mono = cat.is_mono(&f);
            let epi = cat.is_epi(&f);
            Ok(json!({
                "mono": mono,
                "epi": epi,
                "normal_mono": mono && zexact::is_normal_mono(cat, &f)?,
                "normal_epi": zexact::is_normal_epi(cat, &f),
                "normal_map": zexact::is_normal_map(cat, &f),
                "subnormal": zexact::is_subnormal_map(cat, &f),
                "cosubnormal": zexact::is_cosubnormal_map(cat, &f),
                "iso": zexact::iso_check(cat, &f),
            }))
        }
        "meet" | "join" => {
            let m = named.mor(field(q, "left")?, "query.left")?;
            let n = named.mor(field(q, "right")?, "query.right")?;
            let s = if op == "meet" {
                structure::meet(cat, &m, &n)?
            } else {
                structure::join(cat, &m, &n)?
            };
            Ok(json!({"subobject": cat.mor_to_json(&s.incl)}))
        }
        "snake" => {
            let top_k = named.mor(field(q, "top_k")?, "query.top_k")?;
            let top_q = named.mor(field(q, "top_q")?, "query.top_q")?;
            let bot_l = named.mor(field(q, "bottom_l")?, "query.bottom_l")?;
            let bot_r = named.mor(field(q, "bottom_r")?, "query.bottom_r")?;
            let kappa = named.mor(field(q, "kappa")?, "query.kappa")?;
            let xi = named.mor(field(q, "xi")?, "query.xi")?;
            let rho = named.mor(field(q, "rho")?, "query.rho")?;
            let msm = SesMorphism::new(
                cat,
                diexact::ses(cat, top_k, top_q)?,
                diexact::ses(cat, bot_l, bot_r)?,
                kappa,
                xi,
                rho,
            )?;
            let six = homology::snake(cat, &msm)?;
            Ok(json!({
                "objects": six.objects.iter().map(|o| cat.object_label(o)).collect::<Vec<_>>(),
                "maps": six.maps.iter().map(|m| cat.mor_to_json(m)).collect::<Vec<_>>(),
                "connecting_index": six.connecting,
                "exact": true,
            }))
        }
        "homology" | "lambda" => {
            let cx = named.complex(field(q, "complex")?, "query.complex")?;
            let n = field(q, "degree")?
                .as_i64()
                .ok_or_else(|| schema_err("query.degree", "expected an integer"))?;
            let dec = homology::decompose(cat, &cx)?;
            if op == "lambda" {
                let lam = homology::lambda(cat, &cx, &dec, n)?;
                return Ok(json!({
                    "morphism": cat.mor_to_json(&lam),
                    "iso": zexact::iso_check(cat, &lam),
                }));
            }
            let variant = q.get("variant").and_then(|v| v.as_str()).unwrap_or("c");
            let h = match variant {
                "c" => homology::homology_c(cat, &cx, &dec, n)?,
                "k" => homology::homology_k(cat, &cx, &dec, n)?,
                other => {
                    return Err(schema_err("query.variant", format!("unknown variant {other}")))
                }
            };
            Ok(json!({
                "object": cat.obj_to_json(&h.object),
                "label": cat.object_label(&h.object),
                "class": homology::classify(cat, &cx)?.to_string(),
            }))
        }
        "les" => {
            let a = named.complex(field(q, "a")?, "query.a")?;
            let b = named.complex(field(q, "b")?, "query.b")?;
            let c = named.complex(field(q, "c")?, "query.c")?;
            let lo = field(q, "lo")?
                .as_i64()
                .ok_or_else(|| schema_err("query.lo", "expected an integer"))?;
            let f: Vec<C::Mor> = field(q, "f")?
                .as_array()
                .ok_or_else(|| schema_err("query.f", "expected names"))?
                .iter()
                .map(|v| named.mor(v, "query.f"))
                .collect::<Result<_>>()?;
            let g: Vec<C::Mor> = field(q, "g")?
                .as_array()
                .ok_or_else(|| schema_err("query.g", "expected names"))?
                .iter()
                .map(|v| named.mor(v, "query.g"))
                .collect::<Result<_>>()?;
            let ses = ComplexSes::new(cat, a, b, c, f, g, lo)?;
            let les = homology::long_exact_sequence(cat, &ses)?;
            Ok(json!({
                "nodes": les
                    .nodes
                    .iter()
                    .map(|n| json!({
                        "complex": n.complex.to_string(),
                        "degree": n.degree,
                        "label": cat.object_label(&n.object),
                    }))
                    .collect::<Vec<_>>(),
                "maps": les.maps.iter().map(|m| cat.mor_to_json(m)).collect::<Vec<_>>(),
                "exact": true,
            }))
        }
        "3x3" => {
            let mode = q.get("mode").and_then(|m| m.as_str()).unwrap_or("border");
            let grid = field(q, "grid")?;
            let hslots = grid
                .get("h")
                .and_then(|h| h.as_array())
                .ok_or_else(|| schema_err("query.grid.h", "expected 3 rows"))?;
            let vslots = grid
                .get("v")
                .and_then(|v| v.as_array())
                .ok_or_else(|| schema_err("query.grid.v", "expected 2 rows"))?;
            let slot = |v: &Value, path: &str| -> Result<Option<C::Mor>> {
                if v.is_null() {
                    Ok(None)
                } else {
                    Ok(Some(named.mor(v, path)?))
                }
            };
            if hslots.len() != 3 || vslots.len() != 2 {
                return Err(schema_err("query.grid", "expected 3 h-rows and 2 v-rows"));
            }
            let mut h: [[Option<C::Mor>; 2]; 3] = Default::default();
            let mut v: [[Option<C::Mor>; 3]; 2] = Default::default();
            for (r, row) in hslots.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| schema_err(&format!("query.grid.h[{r}]"), "expected 2"))?;
                for (c, val) in row.iter().enumerate().take(2) {
                    h[r][c] = slot(val, &format!("query.grid.h[{r}][{c}]"))?;
                }
            }
            for (r, row) in vslots.iter().enumerate() {
                let row = row
                    .as_array()
                    .ok_or_else(|| schema_err(&format!("query.grid.v[{r}]"), "expected 3"))?;
                for (c, val) in row.iter().enumerate().take(3) {
                    v[r][c] = slot(val, &format!("query.grid.v[{r}][{c}]"))?;
                }
            }
            let completed = match mode {
                "border" => diexact::three_by_three_border(cat, &PartialGrid { h, v })?,
                "middle" => {
                    let full = |m: Option<C::Mor>, path: &str| {
                        m.ok_or_else(|| schema_err(path, "middle mode needs a full grid"))
                    };
                    let mut hs = h.into_iter().flatten();
                    let mut vs = v.into_iter().flatten();
                    let mut next_h =
                        || full(hs.next().unwrap_or(None), "query.grid.h");
                    let h_full: [[C::Mor; 2]; 3] = [
                        [next_h()?, next_h()?],
                        [next_h()?, next_h()?],
                        [next_h()?, next_h()?],
                    ];
                    let mut next_v =
                        || full(vs.next().unwrap_or(None), "query.grid.v");
                    let v_full: [[C::Mor; 3]; 2] = [
                        [next_v()?, next_v()?, next_v()?],
                        [next_v()?, next_v()?, next_v()?],
                    ];
                    let objects = std::array::from_fn(|r: usize| {
                        std::array::from_fn(|c: usize| {
                            if c < 2 {
                                cat.dom(&h_full[r][c])
                            } else {
                                cat.cod(&h_full[r][1])
                            }
                        })
                    });
                    let grid = diexact::Grid { objects, h: h_full, v: v_full };
                    diexact::three_by_three_middle(cat, &grid)?
                }
                other => return Err(schema_err("query.mode", format!("unknown mode {other}"))),
            };
            Ok(json!({
                "objects": completed
                    .objects
                    .iter()
                    .map(|row| row.iter().map(|o| cat.object_label(o)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "h": completed
                    .h
                    .iter()
                    .map(|row| row.iter().map(|m| cat.mor_to_json(m)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "v": completed
                    .v
                    .iter()
                    .map(|row| row.iter().map(|m| cat.mor_to_json(m)).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "di_extension": true,
            }))
        }
        "probe" => {
            let axiom: AxiomId = field(q, "axiom")?
                .as_str()
                .ok_or_else(|| schema_err("query.axiom", "expected a string"))?
                .parse()?;
            let max_size = as_usize(field(q, "max_size")?, "query.max_size")?;
            let max_checks = q.get("max_checks").and_then(|v| v.as_u64());
            let report = probe::probe(cat, axiom, &ProbeBound { max_size, max_checks })?;
            Ok(axiom_report_to_json(cat, &report))
        }
        "ext" => Err(Error::Unsupported(
            "ext queries are only available on the ab backend".into(),
        )),
        other => Err(schema_err("query.op", format!("unknown op {other}"))),
    }
}

/// The ab backend answers ext queries in addition to the generic ones.
fn run_query_ab(cat: &AbCat, named: &NamedValues<AbCat>, q: &Value) -> Result<Value> {
    let op = q.get("op").and_then(|o| o.as_str()).unwrap_or("");
    if op != "ext" {
        return run_query(cat, named, q);
    }
    let k = named.obj(field(q, "k")?, "query.k")?;
    let qo = named.obj(field(q, "q")?, "query.q")?;
    let cap = q.get("cap").and_then(|c| c.as_u64()).unwrap_or(64) as usize;
    let classes = fgab::ext_classes(cat, &qo, &k, cap)?;
    Ok(json!({
        "count": classes.count,
        "representatives": classes
            .representatives
            .iter()
            .map(|(km, qm)| json!({
                "k": cat.mor_to_json(km),
                "q": cat.mor_to_json(qm),
            }))
            .collect::<Vec<_>>(),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    SetPt,
    CMon,
    Group,
    Ab,
}

impl std::str::FromStr for BackendKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "setpt" => Ok(BackendKind::SetPt),
            "cmon" => Ok(BackendKind::CMon),
            "group" => Ok(BackendKind::Group),
            "ab" => Ok(BackendKind::Ab),
            other => Err(Error::Validation(format!("unknown backend {other}"))),
        }
    }
}

fn backend_kind(file: &Value) -> Result<BackendKind> {
    let cat = file
        .get("category")
        .ok_or_else(|| schema_err("category", "missing category"))?;
    let kind = if let Some(s) = cat.as_str() {
        s.to_string()
    } else {
        cat.get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| schema_err("category.kind", "missing backend kind"))?
            .to_string()
    };
    kind.parse()
}

/// Execute the query of a parsed input file and produce the report value.
pub fn run_file_value(file: &Value) -> Result<Value> {
    let kind = backend_kind(file)?;
    let named = file.get("named").cloned().unwrap_or_else(|| json!({}));
    let query = file
        .get("query")
        .ok_or_else(|| schema_err("query", "missing query"))?;
    let result = match kind {
        BackendKind::SetPt => {
            let cat = SetPt;
            run_query(&cat, &resolve_named(&cat, &named)?, query)?
        }
        BackendKind::CMon => {
            let cat = CMonCat;
            run_query(&cat, &resolve_named(&cat, &named)?, query)?
        }
        BackendKind::Group => {
            let cat = Grp;
            run_query(&cat, &resolve_named(&cat, &named)?, query)?
        }
        BackendKind::Ab => {
            let cat = AbCat;
            run_query_ab(&cat, &resolve_named(&cat, &named)?, query)?
        }
    };
    Ok(json!({
        "version": FORMAT_VERSION,
        "backend": match kind {
            BackendKind::SetPt => "setpt",
            BackendKind::CMon => "cmon",
            BackendKind::Group => "group",
            BackendKind::Ab => "ab",
        },
        "query": query.get("op").cloned().unwrap_or(Value::Null),
        "result": result,
    }))
}

/// Parse and execute a JSON input; the returned string is the
/// pretty-printed report (keys sorted, trailing newline).
pub fn run_file_str(input: &str) -> Result<String> {
    let file: Value = serde_json::from_str(input)
        .map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let report = run_file_value(&file)?;
    Ok(format!("{}\n", serde_json::to_string_pretty(&report).expect("report serializes")))
}

/// Validate the file: parse everything and check the query shape, without
/// executing the operation.
pub fn validate_file_str(input: &str) -> Result<Value> {
    let file: Value = serde_json::from_str(input)
        .map_err(|e| schema_err("$", format!("invalid JSON: {e}")))?;
    let kind = backend_kind(&file)?;
    let named = file.get("named").cloned().unwrap_or_else(|| json!({}));
    let (objects, morphisms, complexes) = match kind {
        BackendKind::SetPt => {
            let cat = SetPt;
            let n = resolve_named(&cat, &named)?;
            (n.objects.len(), n.morphisms.len(), n.complexes.len())
        }
        BackendKind::CMon => {
            let cat = CMonCat;
            let n = resolve_named(&cat, &named)?;
            (n.objects.len(), n.morphisms.len(), n.complexes.len())
        }
        BackendKind::Group => {
            let cat = Grp;
            let n = resolve_named(&cat, &named)?;
            (n.objects.len(), n.morphisms.len(), n.complexes.len())
        }
        BackendKind::Ab => {
            let cat = AbCat;
            let n = resolve_named(&cat, &named)?;
            (n.objects.len(), n.morphisms.len(), n.complexes.len())
        }
    };
    let op = file
        .get("query")
        .and_then(|q| q.get("op"))
        .and_then(|o| o.as_str())
        .ok_or_else(|| schema_err("query.op", "missing op"))?;
    const OPS: [&str; 13] = [
        "kernel", "cokernel", "factorize", "classify-map", "snake", "les", "3x3",
        "homology", "lambda", "meet", "join", "ext", "probe",
    ];
    if !OPS.contains(&op) {
        return Err(schema_err("query.op", format!("unknown op {op}")));
    }
    Ok(json!({
        "version": FORMAT_VERSION,
        "valid": true,
        "objects": objects,
        "morphisms": morphisms,
        "complexes": complexes,
        "op": op,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_query_on_the_pointed_set_example() {
        let input = r#"{
            "category": "setpt",
            "named": {
                "X": {"object": {"kind": "setpt", "size": 3}},
                "Y": {"object": {"kind": "setpt", "size": 2}},
                "f": {"morphism": {"dom": "X", "cod": "Y", "table": [0, 0, 1]}}
            },
            "query": {"op": "kernel", "of": "f"}
        }"#;
        let out = run_file_str(input).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["morphism"]["dom"]["size"], 2);
        assert_eq!(v["result"]["morphism"]["map"]["table"], json!([0, 1]));
    }

    #[test]
    fn probe_query_roundtrip_and_witness_replay() {
        let input = r#"{
            "category": "setpt",
            "query": {"op": "probe", "axiom": "ksg", "max_size": 4}
        }"#;
        let out = run_file_str(input).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["verdict"], "counterexample");
        let cat = SetPt;
        let w = witness_from_json(&cat, &v["result"]["witness"]).unwrap();
        assert!(probe::replay(&cat, AxiomId::Ksg, &w).unwrap());
    }

    #[test]
    fn ext_query_on_ab() {
        let input = r#"{
            "category": "ab",
            "named": {
                "Z2": {"object": {"kind": "ab", "rank": 1, "relations": [[2]]}}
            },
            "query": {"op": "ext", "k": "Z2", "q": "Z2"}
        }"#;
        let out = run_file_str(input).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["count"], 2);
    }

    #[test]
    fn group_preset_and_classify() {
        let input = r#"{
            "category": "group",
            "named": {
                "G": {"object": "S3"},
                "H": {"object": "Z1"},
                "z": {"morphism": {"dom": "G", "cod": "H", "table": [0,0,0,0,0,0]}}
            },
            "query": {"op": "classify-map", "of": "z"}
        }"#;
        let out = run_file_str(input).unwrap();
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"]["normal_epi"], json!(true));
    }

    #[test]
    fn schema_errors_name_the_field() {
        let input = r#"{"category": "setpt", "query": {"op": "kernel"}}"#;
        let err = run_file_str(input).unwrap_err();
        match err {
            Error::Schema { path, .. } => assert_eq!(path, "query.of"),
            other => panic!("expected schema error, got {other:?}"),
        }
        let input = r#"{"category": "nowhere", "query": {"op": "kernel"}}"#;
        assert!(run_file_str(input).is_err());
    }

    #[test]
    fn validate_reports_counts() {
        let input = r#"{
            "category": "setpt",
            "named": {"X": {"object": {"kind": "setpt", "size": 2}}},
            "query": {"op": "probe", "axiom": "ann", "max_size": 3}
        }"#;
        let v = validate_file_str(input).unwrap();
        assert_eq!(v["valid"], json!(true));
        assert_eq!(v["objects"], json!(1));
    }

    #[test]
    fn determinism_of_reports() {
        let input = r#"{
            "category": "cmon",
            "query": {"op": "probe", "axiom": "aen", "max_size": 4}
        }"#;
        let a = run_file_str(input).unwrap();
        let b = run_file_str(input).unwrap();
        assert_eq!(a, b);
    }
}
