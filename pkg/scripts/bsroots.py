"""Command line entrypoint for the b-function root computations."""

import logging
import sys

import hydra
import rootutils
from omegaconf import DictConfig, OmegaConf

root = rootutils.setup_root(search_from=__file__, pythonpath=True)

from src.cli import CommandRequest, run
from src.errors import BSRootsError

log = logging.getLogger(__name__)


@hydra.main(version_base=None, config_path=str(root / "configs"), config_name="bsroots.yaml")
def main(cfg: DictConfig) -> None:
    """Parse the composed config into a request and run it."""
    log.debug(f"Job config:\n{OmegaConf.to_yaml(cfg)}")
    try:
        request = CommandRequest.from_config(cfg)
    except BSRootsError as exc:
        sys.stderr.write(f"error[{exc.exit_code}]: {exc}\n")
        sys.exit(exc.exit_code)
    code = run(request)
    if code:
        sys.exit(code)


if __name__ == "__main__":
    main()
