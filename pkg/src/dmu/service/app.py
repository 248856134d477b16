"""FastAPI service wrapping the library.

Every endpoint is a pure request/response computation; numerical inputs
arrive as JSON (measures, polynomials, points) and results embed their
quadrature provenance. Invalid models or measures map to 422/400,
numerical work never mutates server state.
"""
from __future__ import annotations

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__, acceptance, corona, measures, multiplier, potential, quadrature, spaces
from ..poly import CPoly, TrigPoly
from . import models

__all__ = ["create_app", "app"]


def _measure(model: models.MeasureModel) -> measures.MeasureSpec:
    mu = model.to_spec()
    problems = measures.validate_measure(mu)
    if problems:
        raise HTTPException(status_code=400, detail={"invalid_measure": problems})
    return mu


def _points(rows: list[list[float]]) -> np.ndarray:
    return np.array([complex(re, im) for re, im in rows], dtype=complex)


def create_app() -> FastAPI:
    app = FastAPI(title="dmu", version=__version__,
                  description="Dirichlet-type space computations on the unit disk")

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/v1/measure/validate", response_model=models.ValidateMeasureResponse)
    def measure_validate(measure: models.MeasureModel) -> models.ValidateMeasureResponse:
        mu = measure.to_spec()
        problems = measures.validate_measure(mu)
        mass = measures.total_mass(mu) if not problems else None
        return models.ValidateMeasureResponse(valid=not problems,
                                              violations=problems, total_mass=mass)

    @app.post("/v1/weight", response_model=models.WeightResponse)
    def weight(req: models.WeightRequest) -> models.WeightResponse:
        mu = _measure(req.measure)
        pts = _points(req.points)
        if np.any(np.abs(pts) >= 1.0):
            raise HTTPException(status_code=400, detail="points must lie in the open disk")
        field = potential.weight_field(mu, pts)
        rows = [models.WeightRow(re=a, im=b, u=u, v=v) for a, b, u, v in field.rows()]
        return models.WeightResponse(label=mu.label, rows=rows,
                                     provenance=_prov(req.options))

    @app.post("/v1/norm", response_model=models.NormResponse)
    def norm(req: models.NormRequest) -> models.NormResponse:
        mu = _measure(req.measure)
        f = models.poly_from_json(req.poly)
        value = spaces.dmu_norm_sq(f, mu, mode=req.mode)
        others = {m: spaces.dmu_norm_sq(f, mu, mode=m)
                  for m in ("u", "v", "measure") if m != req.mode}
        residuals = {f"vs_{m}": abs(value - v) / max(value, 1e-300)
                     for m, v in others.items()}
        return models.NormResponse(value=value, mode=req.mode, residuals=residuals,
                                   provenance=_prov(req.options))

    @app.post("/v1/localdir", response_model=models.LocalDirichletResponse)
    def localdir(req: models.LocalDirichletRequest) -> models.LocalDirichletResponse:
        f = models.poly_from_json(req.poly)
        lam = complex(req.point[0], req.point[1])
        if abs(lam) > 1.0 + 1e-12:
            raise HTTPException(status_code=400, detail="need |lam| <= 1")
        value = spaces.local_dirichlet(f, lam, method=req.method)
        other = "area" if req.method == "boundary" else "boundary"
        cross = spaces.local_dirichlet(f, lam, method=other)
        return models.LocalDirichletResponse(
            value=value, method=req.method,
            residuals={f"vs_{other}": abs(value - cross) / max(value, 1e-300)},
            provenance=_prov(req.options))

    @app.post("/v1/dual-check", response_model=models.DualCheckResponse)
    def dual_check(req: models.DualCheckRequest) -> models.DualCheckResponse:
        mu = _measure(req.measure)
        p = models.poly_from_json(req.p)
        q = models.poly_from_json(req.q)
        res = spaces.duality_pairing_check(p, q, mu)
        scale = np.sqrt(spaces.dmu_norm_sq(p, mu) * spaces.dmu_norm_sq(q, mu))
        return models.DualCheckResponse(residual=res,
                                        scaled_residual=res / max(scale, 1e-300),
                                        provenance={"gram_degree": max(p.degree, q.degree, 0)})

    @app.post("/v1/hd-norm", response_model=models.HDNormResponse)
    def hd_norm(req: models.HDNormRequest) -> models.HDNormResponse:
        mu = _measure(req.measure)
        f = TrigPoly.from_json({"coeffs": req.coeffs})
        value = spaces.hd_norm_sq(f, mu)
        return models.HDNormResponse(value=value, l2_part=f.l2_norm_sq(),
                                     provenance={"order": f.order})

    @app.post("/v1/carleson", response_model=models.CarlesonResponse)
    def carleson(req: models.CarlesonRequest) -> models.CarlesonResponse:
        nu = _measure(req.measure)
        mu = _measure(req.base_measure)
        try:
            rep = multiplier.carleson_constant(nu, mu, req.degree)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return models.CarlesonResponse(constant=rep.constant, degree=rep.degree,
                                       refinement_delta=rep.refinement_delta,
                                       gram_condition=rep.gram_condition,
                                       provenance={"base": mu.label, "nu": nu.label})

    @app.post("/v1/mult-norm", response_model=models.MultNormResponse)
    def mult_norm(req: models.MultNormRequest) -> models.MultNormResponse:
        mu = _measure(req.measure)
        phi = models.poly_from_json(req.poly)
        lb = multiplier.multiplier_norm_lb(phi, mu, req.degree)
        sup_c = carleson_c = None
        if req.certificate:
            cert = multiplier.multiplier_certificate(phi, mu, N=req.degree)
            sup_c = cert.sup_circle
            carleson_c = cert.carleson.constant
        return models.MultNormResponse(lower_bound=lb, degree=req.degree,
                                       sup_circle=sup_c, carleson_constant=carleson_c,
                                       provenance={"measure": mu.label})

    @app.post("/v1/pick", response_model=models.PickResponse)
    def pick(req: models.PickRequest) -> models.PickResponse:
        mu = _measure(req.measure)
        phi = models.poly_from_json(req.poly)
        pts = _points(req.points)
        val = multiplier.pick_positivity(req.space, mu, req.degree, phi, pts)
        return models.PickResponse(min_eigenvalue=val, degree=req.degree,
                                   provenance={"space": req.space, "measure": mu.label})

    @app.post("/v1/corona/solve", response_model=models.CoronaSolveResponse)
    def corona_solve_ep(req: models.CoronaSolveRequest) -> models.CoronaSolveResponse:
        prob, sol = _solve_from_request(req)
        return models.CoronaSolveResponse(solution=sol.to_json(),
                                          provenance=_corona_prov(req, prob))

    @app.post("/v1/corona/verify", response_model=models.CoronaVerifyResponse)
    def corona_verify_ep(req: models.CoronaVerifyRequest) -> models.CoronaVerifyResponse:
        prob, sol = _solve_from_request(req.problem)
        rep = corona.corona_verify(sol, prob)
        matches = None
        if req.solution is not None:
            supplied = req.solution.get("g_polys", [])
            matches = len(supplied) == len(sol.g_polys)
            for sp, p in zip(supplied, sol.g_polys):
                q = CPoly.from_json(sp)
                diff = (q - p)
                scale = max(float(np.max(np.abs(p.coeffs))), 1e-300)
                if diff.degree >= 0 and float(np.max(np.abs(diff.coeffs))) > 1e-6 * scale:
                    matches = False
        return models.CoronaVerifyResponse(
            report={
                "bezout_residual": rep.bezout_residual,
                "bezout_residual_fitted": rep.bezout_residual_fitted,
                "dbar_residuals": rep.dbar_residuals,
                "fit_residuals": rep.fit_residuals,
                "g_norms": rep.g_norms,
                "h_norm": rep.h_norm,
                "bound_ratios": rep.bound_ratios,
                "grid_size": rep.grid_size,
            },
            matches_supplied=matches,
            provenance=_corona_prov(req.problem, prob))

    @app.post("/v1/selftest", response_model=models.SelftestResponse)
    def selftest(req: models.SelftestRequest) -> models.SelftestResponse:
        results = acceptance.run_all(indices=req.criteria)
        return models.SelftestResponse(
            passed=all(r.passed for r in results),
            results=[models.CriterionModel(index=r.index, name=r.name, passed=r.passed,
                                           seconds=r.seconds,
                                           limit_seconds=r.limit_seconds,
                                           details=_jsonable(r.details))
                     for r in results])

    return app


def _solve_from_request(req: models.CoronaSolveRequest):
    mu = _measure(req.measure)
    f = [models.poly_from_json(p) for p in req.f]
    h = models.poly_from_json(req.h)
    try:
        prob = corona.CoronaProblem.build(f, h, mu, delta=req.delta)
        sol = corona.corona_solve(prob, n_r=req.options.n_r,
                                  n_theta=max(req.options.n_theta, 64),
                                  N_g=req.fit_degree,
                                  eval_radius=req.grid_radius, jobs=req.jobs)
    except (corona.CoronaConditionError, ValueError) as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    return prob, sol


def _corona_prov(req: models.CoronaSolveRequest, prob) -> dict:
    return {
        "delta": prob.delta,
        "delta_source": prob.delta_source,
        "n_r": req.options.n_r,
        "n_theta": max(req.options.n_theta, 64),
        "grid_radius": req.grid_radius,
    }


def _prov(options: models.QuadratureOptions) -> dict:
    return {"n_r": options.n_r, "n_theta": options.n_theta,
            "n_circle": options.n_circle}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


app = create_app()
