"""Обработчики команд CLI и пакетная проверка систем."""
