"""Test package for uav-underlay-coverage."""
