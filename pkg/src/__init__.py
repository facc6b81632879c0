# src/__init__.py — ıCrystal Engine
