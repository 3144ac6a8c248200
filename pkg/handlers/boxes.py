from boxmodel import is_local_facets, is_local_lp
from box_io import load_box
from dispatcher import Router, arg
from handlers.common import box_report, emit

router = Router()


@router.command("chsh", arg("box", help="box JSON file"), help="correlators and CHSH values of a box")
def cmd_chsh(args) -> str:
    return emit(box_report(load_box(args.box)))


@router.command(
    "local-test",
    arg("box", help="box JSON file"),
    arg("--method", choices=("facets", "lp", "both"), default="both"),
    help="local polytope membership",
)
def cmd_local_test(args) -> str:
    box = load_box(args.box)
    if args.method == "facets":
        return emit(is_local_facets(box).to_dict())
    if args.method == "lp":
        return emit(is_local_lp(box).to_dict())
    facets, lp = is_local_facets(box), is_local_lp(box)
    return emit({"facets": facets.to_dict(), "lp": lp.to_dict(), "agree": facets.is_local == lp.is_local})
