"""Equational logic over finite monoids and factor monoids."""
