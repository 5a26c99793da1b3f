import argparse
import datetime
import importlib
import logging
import os
import sys

from . import PROJECT_NAME, DataError, UsageError

FILE_HANDLER_NAME = f"{PROJECT_NAME}-file"
STREAM_HANDLER_NAME = f"{PROJECT_NAME}-stream"
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

# sub-command -> module under src.commands
COMMANDS = {
  "simulate": ("simulate", "generate the log-normal study sample"),
  "smooth": ("smooth", "turn histograms into smoothed densities"),
  "fpca": ("fpca", "weighted simplicial functional PCA"),
  "select-reference": ("select_reference", "rank candidate references by SS_B/SS_T"),
}

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


def _get_default_log_dir():
  return os.path.join(os.path.expanduser("~"), f".{PROJECT_NAME}", "logs")


def _find_handler(root_logger, name):
  """Find a logger handler by name."""
  for handler in root_logger.handlers:
    if getattr(handler, "name", None) == name:
      return handler
  return None


def _make_stream_handler():
  stream_handler = logging.StreamHandler()
  stream_handler.name = STREAM_HANDLER_NAME
  stream_handler.setLevel(logging.INFO)
  stream_handler.setFormatter(logging.Formatter(LOG_FORMAT))
  return stream_handler


def setup_logging():
  """Configure file and console logging; calling it again reuses the handlers."""
  log_dir = os.environ.get("BAYES_FPCA_LOG_DIR", _get_default_log_dir())
  try:
    os.makedirs(log_dir, exist_ok=True)
  except OSError as e:
    raise OSError(f"Failed to create log directory: {log_dir}: {e}") from e
  log_path = os.path.join(log_dir, datetime.date.today().strftime("%Y-%m-%d.log"))
  log_path_abs = os.path.abspath(log_path)

  root_logger = logging.getLogger()
  file_handler = _find_handler(root_logger, FILE_HANDLER_NAME)
  stream_handler = _find_handler(root_logger, STREAM_HANDLER_NAME)
  same_file = file_handler is not None and getattr(file_handler, "baseFilename", None) == log_path_abs

  if same_file and stream_handler:
    return log_path
  if same_file:
    root_logger.addHandler(_make_stream_handler())
    return log_path

  for handler in (file_handler, stream_handler):
    if handler:
      root_logger.removeHandler(handler)
      handler.close()

  root_logger.setLevel(logging.DEBUG)
  try:
    file_handler = logging.FileHandler(log_path, encoding="utf-8")
  except OSError as e:
    raise OSError(f"Failed to create log file: {log_path}: {e}") from e
  file_handler.name = FILE_HANDLER_NAME
  file_handler.setLevel(logging.DEBUG)
  file_handler.setFormatter(logging.Formatter(LOG_FORMAT))

  root_logger.addHandler(file_handler)
  root_logger.addHandler(_make_stream_handler())
  return log_path


class ArgumentParser(argparse.ArgumentParser):
  """argparse parser that raises UsageError instead of exiting."""

  def error(self, message):
    raise UsageError(f"{self.prog}: {message}")


def build_parser():
  parser = ArgumentParser(prog=PROJECT_NAME, description="Weighted Bayes-space FPCA of probability densities")
  subparsers = parser.add_subparsers(dest="command", metavar="command")
  subparsers.required = True
  for name, (module_name, help_text) in COMMANDS.items():
    module = importlib.import_module(f".commands.{module_name}", __package__)
    subparser = subparsers.add_parser(name, help=help_text)
    module.add_arguments(subparser)
    subparser.set_defaults(module=module)
  return parser


def main(argv=None):
  try:
    log_path = setup_logging()
  except OSError as e:
    print(e, file=sys.stderr)
    return EXIT_DATA
  logging.debug(f"Logging to {log_path}")

  try:
    args = build_parser().parse_args(argv)
    logging.info(f"Running {args.command}")
    args.module.run(args)
  except UsageError as e:
    logging.error(f"Usage error: {e}")
    return EXIT_USAGE
  except (DataError, ValueError, OSError) as e:
    logging.error(f"{type(e).__name__}: {e}")
    return EXIT_DATA
  return EXIT_OK


if __name__ == "__main__":
  sys.exit(main())
