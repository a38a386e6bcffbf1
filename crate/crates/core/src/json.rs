//! JSON forms of the external objects. Output goes through `Serialize` or
//! the `*_to_value` functions; input parsing takes the active [`FieldSpec`]
//! explicitly, since residues are bare decimal strings whose modulus is
//! carried by the enclosing document header.

use serde::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use crate::blowdown::{BigPsi, Region, V1Form, V2Form};
use crate::error::Error;
use crate::field::{FieldSpec, Scalar};
use crate::kronecker::KModule;
use crate::mat::Mat2;
use crate::modulimap::WPoint;
use crate::multilinear::{CoordChange, LinForm, QuadForm, MONOMIALS};
use crate::normalform::NormalForm;

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub fn scalar_to_value(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

pub fn parse_scalar(v: &Value, spec: FieldSpec) -> crate::Result<Scalar> {
    match v {
        Value::String(s) => spec.parse_scalar(s),
        Value::Number(n) => spec.parse_scalar(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a scalar, got {v}"))),
    }
}

pub fn lin_form_to_value(l: &LinForm) -> Value {
    json!({
        "x": scalar_to_value(&l.0[0]),
        "y": scalar_to_value(&l.0[1]),
        "z": scalar_to_value(&l.0[2]),
        "w": scalar_to_value(&l.0[3]),
    })
}

pub fn parse_lin_form(v: &Value, spec: FieldSpec) -> crate::Result<LinForm> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("expected a linear-form object, got {v}")))?;
    let mut l = LinForm::zero(spec);
    for (key, val) in obj {
        let idx = match key.as_str() {
            "x" => 0,
            "y" => 1,
            "z" => 2,
            "w" => 3,
            _ => return Err(Error::Parse(format!("unknown linear-form key {key:?}"))),
        };
        l.0[idx] = parse_scalar(val, spec)?;
    }
    Ok(l)
}

pub fn quad_form_to_value(q: &QuadForm) -> Value {
    let mut map = Map::new();
    for (k, name) in MONOMIALS.iter().enumerate() {
        if !q.0[k].is_zero() {
            map.insert((*name).into(), scalar_to_value(&q.0[k]));
        }
    }
    Value::Object(map)
}

pub fn parse_quad_form(v: &Value, spec: FieldSpec) -> crate::Result<QuadForm> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("expected a quadratic-form object, got {v}")))?;
    let mut q = QuadForm::zero(spec);
    for (key, val) in obj {
        let k = MONOMIALS
            .iter()
            .position(|m| m == key)
            .ok_or_else(|| Error::Parse(format!("unknown monomial {key:?}")))?;
        q.0[k] = parse_scalar(val, spec)?;
    }
    Ok(q)
}

pub fn kmodule_to_value(phi: &KModule) -> Value {
    Value::Array(
        phi.e
            .iter()
            .map(|row| Value::Array(row.iter().map(lin_form_to_value).collect()))
            .collect(),
    )
}

pub fn parse_kmodule(v: &Value, spec: FieldSpec) -> crate::Result<KModule> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("expected a 2x2 array of linear forms".into()))?;
    if rows.len() != 2 {
        return Err(Error::Parse("module must have exactly two rows".into()));
    }
    let mut out = KModule::zero(spec);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::Parse("module rows must be arrays".into()))?;
        if cells.len() != 2 {
            return Err(Error::Parse("module rows must have two entries".into()));
        }
        for (j, cell) in cells.iter().enumerate() {
            out.e[i][j] = parse_lin_form(cell, spec)?;
        }
    }
    Ok(out)
}

pub fn wpoint_to_value(p: &WPoint) -> Value {
    json!({
        "q": quad_form_to_value(p.q()),
        "p": scalar_to_value(p.p()),
        "canonical": true,
    })
}

pub fn parse_wpoint(v: &Value, spec: FieldSpec) -> crate::Result<WPoint> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a weighted point object".into()))?;
    let q = parse_quad_form(
        obj.get("q")
            .ok_or_else(|| Error::Parse("weighted point needs \"q\"".into()))?,
        spec,
    )?;
    let p = parse_scalar(
        obj.get("p")
            .ok_or_else(|| Error::Parse("weighted point needs \"p\"".into()))?,
        spec,
    )?;
    WPoint::new(q, p)
}

pub fn mat2_to_value(m: &Mat2) -> Value {
    Value::Array(
        m.0.iter()
            .map(|row| Value::Array(row.iter().map(scalar_to_value).collect()))
            .collect(),
    )
}

pub fn coord_change_to_value(u: &CoordChange) -> Value {
    Value::Array(
        u.matrix()
            .iter()
            .map(|row| Value::Array(row.iter().map(scalar_to_value).collect()))
            .collect(),
    )
}

pub fn normal_form_to_value(nf: &NormalForm) -> Value {
    json!({
        "lambda": scalar_to_value(&nf.lambda),
        "a": scalar_to_value(&nf.a),
        "b": scalar_to_value(&nf.b),
        "c": scalar_to_value(&nf.c),
        "d": scalar_to_value(&nf.d),
        "upsilon": coord_change_to_value(&nf.upsilon),
        "g": mat2_to_value(&nf.gh.g),
        "h": mat2_to_value(&nf.gh.h),
    })
}

fn v1_to_value(f: &V1Form) -> Value {
    json!({"u1": scalar_to_value(&f.0[0]), "v1": scalar_to_value(&f.0[1])})
}

fn v2_to_value(f: &V2Form) -> Value {
    json!({"u2": scalar_to_value(&f.0[0]), "v2": scalar_to_value(&f.0[1])})
}

fn parse_pair(
    v: &Value,
    spec: FieldSpec,
    keys: [&str; 2],
) -> crate::Result<[Scalar; 2]> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("expected a form object with keys {keys:?}")))?;
    let mut out = [spec.zero(), spec.zero()];
    for (key, val) in obj {
        let idx = keys
            .iter()
            .position(|k| k == key)
            .ok_or_else(|| Error::Parse(format!("unknown key {key:?}, expected {keys:?}")))?;
        out[idx] = parse_scalar(val, spec)?;
    }
    Ok(out)
}

pub fn bigpsi_to_value(psi: &BigPsi) -> Value {
    json!({
        "a1": scalar_to_value(&psi.a1),
        "a2": scalar_to_value(&psi.a2),
        "u12": v2_to_value(&psi.u12),
        "v12": v2_to_value(&psi.v12),
        "u11": v1_to_value(&psi.u11),
        "v11": v1_to_value(&psi.v11),
        "u21": v1_to_value(&psi.u21),
        "v21": v1_to_value(&psi.v21),
        "u22": v2_to_value(&psi.u22),
        "v22": v2_to_value(&psi.v22),
        "f11": lin_form_to_value(&psi.f[0][0]),
        "f12": lin_form_to_value(&psi.f[0][1]),
        "f21": lin_form_to_value(&psi.f[1][0]),
        "f22": lin_form_to_value(&psi.f[1][1]),
    })
}

pub fn parse_bigpsi(v: &Value, spec: FieldSpec) -> crate::Result<BigPsi> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("expected a psi object with named fields".into()))?;
    for key in obj.keys() {
        const KNOWN: [&str; 14] = [
            "a1", "a2", "u12", "v12", "u11", "v11", "u21", "v21", "u22", "v22", "f11", "f12",
            "f21", "f22",
        ];
        if !KNOWN.contains(&key.as_str()) {
            return Err(Error::Parse(format!("unknown psi field {key:?}")));
        }
    }
    let scalar = |name: &str| -> crate::Result<Scalar> {
        obj.get(name)
            .map(|v| parse_scalar(v, spec))
            .unwrap_or_else(|| Ok(spec.zero()))
    };
    let v1 = |name: &str| -> crate::Result<V1Form> {
        obj.get(name)
            .map(|v| Ok(V1Form(parse_pair(v, spec, ["u1", "v1"])?)))
            .unwrap_or_else(|| Ok(V1Form::zero(spec)))
    };
    let v2 = |name: &str| -> crate::Result<V2Form> {
        obj.get(name)
            .map(|v| Ok(V2Form(parse_pair(v, spec, ["u2", "v2"])?)))
            .unwrap_or_else(|| Ok(V2Form::zero(spec)))
    };
    let lin = |name: &str| -> crate::Result<LinForm> {
        obj.get(name)
            .map(|v| parse_lin_form(v, spec))
            .unwrap_or_else(|| Ok(LinForm::zero(spec)))
    };
    Ok(BigPsi {
        a1: scalar("a1")?,
        a2: scalar("a2")?,
        u12: v2("u12")?,
        v12: v2("v12")?,
        u11: v1("u11")?,
        v11: v1("v11")?,
        u21: v1("u21")?,
        v21: v1("v21")?,
        u22: v2("u22")?,
        v22: v2("v22")?,
        f: [[lin("f11")?, lin("f12")?], [lin("f21")?, lin("f22")?]],
    })
}

pub fn region_to_value(r: Region) -> Value {
    serde_json::to_value(r).expect("region serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rational;

    #[test]
    fn kmodule_round_trip() {
        let phi = KModule::from_i64(
            Q,
            [
                [[1, 0, 0, 1], [0, 1, 0, 0]],
                [[0, 0, 1, 0], [1, 0, 0, 3]],
            ],
        );
        let v = kmodule_to_value(&phi);
        let back = parse_kmodule(&v, Q).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn scalars_parse_from_numbers_and_strings() {
        assert_eq!(parse_scalar(&json!(5), Q).unwrap(), Q.from_i64(5));
        assert_eq!(parse_scalar(&json!("3/4"), Q).unwrap().to_string(), "3/4");
        let f = FieldSpec::fp(10007).unwrap();
        assert_eq!(parse_scalar(&json!(-1), f).unwrap().to_string(), "10006");
        assert!(parse_scalar(&json!([1]), Q).is_err());
    }

    #[test]
    fn quad_form_omits_zeros_and_rejects_junk() {
        let q = QuadForm::from_monomials(Q, &[("x2", 1), ("yz", -1)]);
        let v = quad_form_to_value(&q);
        assert_eq!(v.as_object().unwrap().len(), 2);
        assert_eq!(parse_quad_form(&v, Q).unwrap(), q);
        assert!(parse_quad_form(&json!({"x3": "1"}), Q).is_err());
    }

    #[test]
    fn wpoint_round_trip_canonicalizes() {
        let q = QuadForm::from_monomials(Q, &[("xw", 2), ("yz", -2)]);
        let p = WPoint::new(q, Q.from_i64(4)).unwrap();
        let v = wpoint_to_value(&p);
        let back = parse_wpoint(&v, Q).unwrap();
        assert_eq!(back, p);
        assert_eq!(v["q"]["xw"], json!("1"));
        assert_eq!(v["p"], json!("1"));
    }

    #[test]
    fn bigpsi_round_trip() {
        let spec = FieldSpec::fp(1009).unwrap();
        let mut s = crate::sample::Sampler::new(spec, 3);
        let psi = s.big_psi_w0();
        let v = bigpsi_to_value(&psi);
        let back = parse_bigpsi(&v, spec).unwrap();
        assert_eq!(back, psi);
        assert!(parse_bigpsi(&json!({"a3": "1"}), spec).is_err());
    }

    #[test]
    fn lin_form_rejects_unknown_keys() {
        assert!(parse_lin_form(&json!({"t": "1"}), Q).is_err());
        let l = parse_lin_form(&json!({"x": "1"}), Q).unwrap();
        assert_eq!(l, LinForm::from_i64(Q, [1, 0, 0, 0]));
    }
}
