from box_io import load_box, load_chain
from dispatcher import Router, arg
from handlers.common import box_report, emit
from wiring import POSITIONS, absorption_audit, compose_chain, stage_chsh

router = Router()


@router.command("wire", arg("chain", help="chain JSON file"), help="compose a chain of boxes left to right")
def cmd_wire(args) -> str:
    chain = load_chain(args.chain)
    box = compose_chain(chain)
    return emit({"box": box.to_dict(), "report": box_report(box), "stage_chsh_max": stage_chsh(chain.stages)})


@router.command(
    "audit",
    arg("box", help="box JSON file"),
    arg("--position", choices=POSITIONS, required=True),
    help="insert every local deterministic stage before or after the box",
)
def cmd_audit(args) -> str:
    return emit(absorption_audit(load_box(args.box), args.position).to_list())
