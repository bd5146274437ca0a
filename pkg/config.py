"""Конфигурация tworay: переменные окружения TWORAY_* и файл .env."""
import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()

ENV_PREFIX = "TWORAY_"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ConfigError(Exception):
    """Исключение для ошибок конфигурации."""
    pass


@dataclass
class Config:
    """Уровень логов, бюджеты проверок и число процессов."""

    # Уровень логирования (логи идут в stderr)
    log_level: str = "WARNING"

    # Предел размерности алгебры для verify_lemmas
    verify_budget: int = 400

    # Предел числа путей для оракула размерности
    path_budget: int = 20000

    # Число процессов для enumerate --check-all; 1 - без пула
    workers: int = 1

    def __post_init__(self) -> None:
        """Валидация конфигурации после инициализации."""
        self.validate()

    def validate(self) -> None:
        """Собирает все ошибки и выбрасывает одну ConfigError."""
        errors = []

        if self.log_level not in LOG_LEVELS:
            errors.append(f"LOG_LEVEL должен быть одним из {LOG_LEVELS}, получено: {self.log_level}")

        if self.verify_budget < 0:
            errors.append("VERIFY_BUDGET не может быть отрицательным")

        if self.path_budget < 0:
            errors.append("PATH_BUDGET не может быть отрицательным")

        if self.workers < 1:
            errors.append(f"WORKERS должен быть не меньше 1, получено: {self.workers}")

        if errors:
            error_msg = "Ошибки конфигурации:\n" + "\n".join(f"  - {e}" for e in errors)
            raise ConfigError(error_msg)

    @staticmethod
    def _int_from_env(name: str, default: int) -> int:
        raw = os.getenv(ENV_PREFIX + name)
        if raw is None or not raw.strip():
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{ENV_PREFIX}{name} должен быть числом, получено: {raw}")

    @classmethod
    def from_env(cls) -> "Config":
        """
        Создает конфигурацию из переменных окружения TWORAY_*.

        Raises:
            ConfigError: Если конфигурация невалидна или число не разбирается
        """
        log_level = (os.getenv(ENV_PREFIX + "LOG_LEVEL") or "WARNING").strip().upper()

        return cls(
            log_level=log_level,
            verify_budget=cls._int_from_env("VERIFY_BUDGET", 400),
            path_budget=cls._int_from_env("PATH_BUDGET", 20000),
            workers=cls._int_from_env("WORKERS", 1),
        )

    def __repr__(self) -> str:
        return (
            f"Config("
            f"log_level={self.log_level}, "
            f"verify_budget={self.verify_budget}, "
            f"path_budget={self.path_budget}, "
            f"workers={self.workers}"
            f")"
        )
