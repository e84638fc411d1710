from flask import Flask, request
from werkzeug.exceptions import HTTPException

from config import DEFAULT_SEED, HBAR_DEFAULT, STAT_MARGIN_SIGMAS
from witness import __version__
from witness.common.exceptions import TsirelsonViolationError, ValidationError
from witness.common.operator_core import Operator
from witness.gaussian.epr_reid import epr_reid
from witness.gaussian.spdc import PhysicalConfig, SpdcConfig, pump_state, widths_state
from witness.qubit.chsh import GREEN_SETTINGS, YELLOW_SETTINGS, chsh_evaluate
from witness.qubit.correlations import correlation_matrix_named
from witness.qubit.states import TwoQubitState, from_selector
from witness.sampler.continuous import epr_reid_sampled
from witness.sampler.discrete import chsh_estimate
from utils.angles import parse_angle


def _json_body() -> dict:
    body = request.get_json(silent=True)
    if not isinstance(body, dict):
        raise ValidationError("请求体必须是 JSON 对象")
    return body


def _number(data: dict, key: str, default=None, kind=float):
    """数值字段转换，缺省时返回 default"""
    value = data.get(key)
    if value is None:
        return default
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ValidationError(f"字段 {key} 必须是数字: {value!r}") from None


def _state_from_body(body: dict) -> TwoQubitState:
    """state 可以是选择器名称，也可以是算符 JSON"""
    state = body.get("state", "phi_plus")
    if isinstance(state, dict):
        return TwoQubitState(Operator.from_dict(state))
    p = _number(body, "p")
    params = [] if p is None else [p]
    return from_selector(str(state), params)


def _settings_from_body(body: dict):
    settings = body.get("settings")
    if settings is None:
        preset = body.get("preset", "green")
        if preset not in ("green", "yellow"):
            raise ValidationError(f"未知预设: {preset!r}")
        return GREEN_SETTINGS if preset == "green" else YELLOW_SETTINGS
    if not isinstance(settings, list):
        raise ValidationError("settings 必须是数组")
    return [parse_angle(s) for s in settings]


def _sample_size(body: dict):
    sample = body.get("sample")
    if sample is None:
        return None
    if not isinstance(sample, int) or sample < 2:
        raise ValidationError(f"sample 必须是 ≥ 2 的整数: {sample!r}")
    return sample


def create_app():
    app = Flask(__name__)

    @app.errorhandler(ValidationError)
    def handle_validation_error(e):
        return {"success": False, "error": str(e)}, 400

    @app.errorhandler(TsirelsonViolationError)
    def handle_tsirelson_error(e):
        return {"success": False, "error": str(e)}, 500

    @app.errorhandler(Exception)
    def handle_unexpected_error(e):
        if isinstance(e, HTTPException):
            return {"success": False, "error": e.description}, e.code
        return {"success": False, "error": str(e)}, 500

    @app.route("/api/health")
    def api_health():
        """服务状态"""
        return {"success": True, "data": {"status": "ok", "version": __version__}}

    @app.route("/api/corrmat", methods=["POST"])
    def api_corrmat():
        """关联矩阵API"""
        body = _json_body()
        state = _state_from_body(body)
        matrix = correlation_matrix_named(
            state, body.get("basis_a", "original"), body.get("basis_b", "original")
        )
        return {"success": True, "data": matrix.to_dict()}

    @app.route("/api/chsh", methods=["POST"])
    def api_chsh():
        """CHSH 判据API，带 sample 时走统计模式"""
        body = _json_body()
        state = _state_from_body(body)
        settings = _settings_from_body(body)
        sample = _sample_size(body)
        if sample:
            seed = _number(body, "seed", DEFAULT_SEED, int)
            result = chsh_estimate(state, settings, sample, seed, STAT_MARGIN_SIGMAS)
        else:
            result = chsh_evaluate(state, settings)
        return {"success": True, "data": result.to_dict()}

    @app.route("/api/epr-reid", methods=["POST"])
    def api_epr_reid():
        """EPR-Reid 判据API：spdc 与 widths 二选一"""
        body = _json_body()
        phys = PhysicalConfig(_number(body, "hbar", HBAR_DEFAULT))
        has_spdc, has_widths = "spdc" in body, "widths" in body
        if has_spdc == has_widths:
            raise ValidationError("必须且只能给出 spdc 或 widths 之一")
        if has_spdc:
            state = pump_state(SpdcConfig.from_dict(body["spdc"]), phys)
        else:
            widths = body["widths"]
            if not isinstance(widths, dict) or widths.get("dxm") is None or widths.get("dpp") is None:
                raise ValidationError("widths 必须是含 dxm、dpp 的对象")
            state = widths_state(
                _number(widths, "dxm"),
                _number(widths, "dpp"),
                _number(widths, "dxp"),
                _number(widths, "dpm"),
                phys,
            )

        sample = _sample_size(body)
        if sample:
            result = epr_reid_sampled(state, sample, _number(body, "seed", DEFAULT_SEED, int))
        else:
            result = epr_reid(state)
        data = result.to_dict()
        data["state"] = state.to_dict()
        return {"success": True, "data": data}

    return app
