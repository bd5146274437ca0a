"""Вычислительные модули: системы, колчаны, комбинаторные структуры, алгебры."""
