"""Workbench for partial combinatory algebras and their oracle extensions."""
