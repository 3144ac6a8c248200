import config
from deform import (
    DeformationParams,
    combined_chsh,
    deformed_argmax,
    deformed_sum,
    idempotent_combined_chsh,
    solve_xmax,
    sweep_T,
)
from dispatcher import Router, arg
from handlers.common import emit
from utils import format_float, parse_t_list, to_csv

router = Router()


def _params(args) -> DeformationParams:
    return DeformationParams(
        T=getattr(args, "T", config.DEFAULT_T),
        quad_order=args.quad_order,
        root_tol=getattr(args, "tol", config.ROOT_TOL),
        target=getattr(args, "target", config.DEFAULT_TARGET),
        Y=getattr(args, "Y", config.DEFAULT_Y),
    )


_T = arg("--T", type=float, default=config.DEFAULT_T, help="deformation parameter")
_Y = arg("--Y", type=float, default=config.DEFAULT_Y, help="CHSH limit of the lower summand")
_QUAD = arg("--quad-order", type=int, default=config.QUAD_ORDER)
_TARGET = arg("--target", type=float, default=config.DEFAULT_TARGET)
_TOL = arg("--tol", type=float, default=config.ROOT_TOL)


@router.command("combine", arg("--X", type=float, required=True), _Y, _T, _QUAD, help="deformed combination Z(Y, X)")
def cmd_combine(args) -> str:
    return emit(combined_chsh(args.Y, args.X, _params(args)).to_dict())


@router.command("solve", _T, _TARGET, _TOL, _Y, _QUAD, help="solve Z(Y, X) = target for X")
def cmd_solve(args) -> str:
    return emit(solve_xmax(_params(args)).to_dict())


@router.command(
    "sweep",
    arg("--T-list", required=True, help="comma separated values or start:stop:count"),
    _TARGET,
    _TOL,
    _Y,
    _QUAD,
    arg("--workers", type=int, default=config.SWEEP_WORKERS),
    help="x_max as a function of T, CSV on stdout",
)
def cmd_sweep(args) -> str:
    params = _params(args)
    rows = sweep_T(parse_t_list(args.T_list), params, workers=args.workers)
    # строки с ошибкой скобки: nan в числовых полях
    lines = [
        [format_float(row.T)]
        + ["nan" if value is None else format_float(value) for value in (row.x_max, row.residual, row.gap)]
        for row in rows
    ]
    return to_csv(("T", "x_max", "residual", "gap"), lines)


@router.command(
    "idem",
    arg("--X", type=float, required=True),
    _Y,
    _T,
    arg("--grid", type=int, default=config.IDEM_GRID),
    _QUAD,
    help="idempotent (sup) reading of the combination",
)
def cmd_idem(args) -> str:
    sup = idempotent_combined_chsh(args.Y, args.X, args.T, args.grid)
    return emit({
        "sup": sup,
        "closed_form": deformed_sum(args.Y, args.X, args.T),
        "argmax": deformed_argmax(args.Y, args.X, args.T),
        "Z": combined_chsh(args.Y, args.X, _params(args)).Z,
    })
