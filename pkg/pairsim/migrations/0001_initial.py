# Generated by Django 5.2.4 on 2026-10-18 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SimulationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("command", models.CharField(max_length=32)),
                ("input_hash", models.CharField(db_index=True, max_length=64)),
                ("manifest_hash", models.CharField(db_index=True, max_length=64)),
                ("tool_version", models.CharField(max_length=32)),
                ("tolerances", models.JSONField(default=dict)),
                ("methods", models.JSONField(default=list)),
                ("inputs", models.JSONField(default=dict)),
                ("summary", models.JSONField(default=dict)),
                ("output_dir", models.CharField(blank=True, max_length=512)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at", "-id"],
            },
        ),
    ]
