"""Главный файл: командная строка tworay."""
import argparse
import asyncio
import json
import logging
import sys

from config import Config, ConfigError
from handlers.commands import HANDLERS, Reply
from services.algebra import LEMMAS
from services.errors import InternalError, TwoRayError
from services.models import Vertex

logger = logging.getLogger(__name__)


def setup_logging(level: str) -> None:
    # stdout занят отчётами, логи идут в stderr
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[
            logging.StreamHandler(sys.stderr),
        ],
    )


def _index(raw: str) -> Vertex:
    try:
        return Vertex.parse(raw)
    except TwoRayError as e:
        raise argparse.ArgumentTypeError(str(e))


def _lemmas(raw: str) -> tuple[str, ...]:
    names = tuple(name.strip() for name in raw.split(",") if name.strip())
    unknown = [name for name in names if name not in LEMMAS]
    if unknown or not names:
        raise argparse.ArgumentTypeError(
            f"неизвестные леммы {unknown}; допустимы: {','.join(LEMMAS)}"
        )
    return names


def _non_negative(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError("значение не может быть отрицательным")
    return value


def _positive(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError("значение должно быть не меньше 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tworay",
        description="Определяющие системы, комбинаторные структуры и их алгебры",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(name: str, help_text: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file", help="JSON с определяющей системой")
        cmd.add_argument("--json", action="store_true", help="машиночитаемый вывод")
        return cmd

    with_file("validate", "проверить ограничения DS1-DS6")
    cmd = with_file("quiver", "построить связанный колчан")
    cmd.add_argument("--format", choices=("text", "dot", "json"), default="text")
    cmd = with_file("structure", "выведенная комбинаторная структура")
    cmd.add_argument("--paths", action="store_true", help="добавить пути ω, μ, ν")
    with_file("admissible", "допустимые индексы")
    cmd = with_file("extend", "расширение по допустимому индексу")
    cmd.add_argument("--index", type=_index, required=True, help="индекс вида x:i:j или z:i:j")
    with_file("ancestry", "цепочка расширений от фундаментальной системы")
    with_file("census", "перепись компонент")
    cmd = with_file("verify", "проверка лемм о модулях X, R и τ")
    cmd.add_argument("--lemmas", type=_lemmas, default=None)
    cmd.add_argument("--budget", type=_non_negative, default=None)

    cmd = sub.add_parser("enumerate", help="перебор систем в границах")
    cmd.add_argument("--max-n", type=_positive, required=True)
    cmd.add_argument("--max-p", type=_positive, required=True)
    cmd.add_argument("--max-q", type=_positive, required=True)
    cmd.add_argument("--max-t", type=_non_negative, required=True)
    cmd.add_argument("--check-all", action="store_true")
    cmd.add_argument("--workers", type=_positive, default=None)
    cmd.add_argument("--budget", type=_non_negative, default=None)
    cmd.add_argument("--json", action="store_true")
    return parser


async def main(args: argparse.Namespace, config: Config) -> Reply:
    """Выполняет выбранную команду."""
    return await HANDLERS[args.command](args, config)


def _error_reply(args: argparse.Namespace, kind: str, message: str) -> Reply:
    if getattr(args, "json", False):
        return Reply(json.dumps({"error": kind, "message": message}, ensure_ascii=False), 1)
    return Reply(f"❌ {message}", 1)


def run(argv: list[str] | None = None) -> int:
    """Разбирает аргументы, выполняет команду и возвращает код завершения."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = Config.from_env()
    except ConfigError as e:
        print(e, file=sys.stderr)
        return 2
    setup_logging(config.log_level)
    logger.debug(f"Команда {args.command}, {config!r}")

    try:
        reply = asyncio.run(main(args, config))
    except OSError as e:
        print(f"Ошибка ввода-вывода: {e}", file=sys.stderr)
        return 2
    except InternalError as e:
        logger.error(f"Внутренняя ошибка: {e}")
        reply = _error_reply(args, type(e).__name__, f"Внутренняя ошибка: {e}")
    except TwoRayError as e:
        reply = _error_reply(args, type(e).__name__, str(e))

    print(reply.text)
    return reply.code


if __name__ == "__main__":
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Остановлено пользователем")
        sys.exit(130)
