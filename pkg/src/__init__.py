"""Spike Regions - Main Package"""
__version__ = "1.0.0"
__author__ = "Spike Regions Development Team"
__description__ = "Exact discrete-time LIF spiking network simulation, construction and region counting"
