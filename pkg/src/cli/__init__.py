"""Linha de comando: analyze, portrait, sweep, audit-canonical"""
