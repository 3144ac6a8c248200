import logging
import sys
import traceback
from typing import List, Optional

from config import LOG_LEVEL
from dispatcher import Dispatcher
from errors import BoxlabError
from handlers import boxes, chains, common, conjecture


def build_dispatcher() -> Dispatcher:
    dp = Dispatcher(prog="boxlab")
    dp.include_router(boxes.router)
    dp.include_router(chains.router)
    dp.include_router(conjecture.router)
    return dp


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        output = build_dispatcher().feed(list(sys.argv[1:] if argv is None else argv))
    except BoxlabError as e:
        logging.debug(f"command failed: {e!r}")
        print(common.error_line(e), file=stderr)
        return common.exit_code_for(e)
    stdout.write(output)
    return common.EXIT_OK


def main():
    logging.basicConfig(level=LOG_LEVEL, stream=sys.stderr)
    return run()


if __name__ == "__main__":
    try:
        sys.exit(main())
    except Exception:
        traceback.print_exc(file=sys.stderr)
        sys.stderr.flush()
        raise
