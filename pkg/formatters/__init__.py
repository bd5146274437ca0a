"""Текстовое оформление отчётов."""
