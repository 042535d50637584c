"""
Test for the django admin modifications.
"""
from django.test import Client, TestCase
from django.contrib.auth import get_user_model
from django.urls import reverse

from core.models import ExperimentRun


class AdminSiteTests(TestCase):
    """Tests for Django admin."""

    def setUp(self):
        """Create superuser, client and an archived run."""
        self.client = Client()
        self.admin_user = get_user_model().objects.create_superuser(
            'admin',
            'admin@example.com',
            'test123'
        )
        self.client.force_login(self.admin_user)

        self.run = ExperimentRun.objects.create(
            command='verify_metric',
            seed=20240601,
            config={'mu': 1.5},
            exit_code=0,
            summary={'passed': True},
        )

    def test_runs_list(self):
        """Test runs listed on the page"""
        url = reverse('admin:core_experimentrun_changelist')
        response = self.client.get(url)
        self.assertContains(response, 'verify_metric')
        self.assertContains(response, '20240601')

    def test_filter_by_exit_code(self):
        """Test the exit code filter"""
        url = reverse('admin:core_experimentrun_changelist')
        response = self.client.get(url, {'exit_code': 1})
        self.assertEqual(response.status_code, 200)
        self.assertNotContains(response, '20240601')

    def test_edit_run_page(self):
        """Test run displaying page works"""
        url = reverse('admin:core_experimentrun_change', args=[self.run.id])
        response = self.client.get(url)
        self.assertEqual(response.status_code, 200)
